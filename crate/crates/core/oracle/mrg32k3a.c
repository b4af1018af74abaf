/*
   Reference MRG32k3a, transcribed from L'Ecuyer's "Good parameters and
   implementations for combined multiple recursive random number generators"
   (1999) floating-point C code. The six seeds are globals there; here they
   are settable so the driver can apply the seed-expansion rule.
*/

#include "oracle.h"

#define norm 2.328306549295727688e-10
#define m1 4294967087.0
#define m2 4294944443.0
#define a12 1403580.0
#define a13n 810728.0
#define a21 527612.0
#define a23n 1370589.0

static double s10 = 12345, s11 = 12345, s12 = 12345,
              s20 = 12345, s21 = 12345, s22 = 12345;

void MRG32k3a_seed(const double s[6])
{
    s10 = s[0]; s11 = s[1]; s12 = s[2];
    s20 = s[3]; s21 = s[4]; s22 = s[5];
}

double MRG32k3a(void)
{
    long k;
    double p1, p2;
    /* Component 1 */
    p1 = a12 * s11 - a13n * s10;
    k = p1 / m1;
    p1 -= k * m1;
    if (p1 < 0.0)
        p1 += m1;
    s10 = s11;
    s11 = s12;
    s12 = p1;

    /* Component 2 */
    p2 = a21 * s22 - a23n * s20;
    k = p2 / m2;
    p2 -= k * m2;
    if (p2 < 0.0)
        p2 += m2;
    s20 = s21;
    s21 = s22;
    s22 = p2;

    /* Combination */
    if (p1 <= p2)
        return ((p1 - p2 + m1) * norm);
    else
        return ((p1 - p2) * norm);
}
