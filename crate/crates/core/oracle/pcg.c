/*
   Reference PCG generators, transcribed from O'Neill's pcg-c / pcg-c-basic:
     pcg32  = pcg_setseq_64_xsh_rr_32   (64-bit state, 32-bit output)
     pcg64  = pcg_setseq_128_xsl_rr_64  (128-bit state, 64-bit output)
*/

#include "oracle.h"

/* ---- pcg-c-basic: pcg32 ---- */

uint32_t pcg32_random_r(pcg32_random_t *rng)
{
    uint64_t oldstate = rng->state;
    rng->state = oldstate * 6364136223846793005ULL + rng->inc;
    uint32_t xorshifted = ((oldstate >> 18u) ^ oldstate) >> 27u;
    uint32_t rot = oldstate >> 59u;
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31));
}

void pcg32_srandom_r(pcg32_random_t *rng, uint64_t initstate, uint64_t initseq)
{
    rng->state = 0U;
    rng->inc = (initseq << 1u) | 1u;
    pcg32_random_r(rng);
    rng->state += initstate;
    pcg32_random_r(rng);
}

/* ---- pcg-c: pcg64 (setseq 128 xsl rr 64) ---- */

#define PCG_128BIT_CONSTANT(high, low) ((((pcg128_t)(high)) << 64) + (low))
#define PCG_DEFAULT_MULTIPLIER_128 \
    PCG_128BIT_CONSTANT(2549297995355413924ULL, 4865540595714422341ULL)

static inline uint64_t pcg_rotr_64(uint64_t value, unsigned int rot)
{
    return (value >> rot) | (value << ((-rot) & 63));
}

static inline void pcg_setseq_128_step_r(pcg64_random_t *rng)
{
    rng->state = rng->state * PCG_DEFAULT_MULTIPLIER_128 + rng->inc;
}

static inline uint64_t pcg_output_xsl_rr_128_64(pcg128_t state)
{
    return pcg_rotr_64(((uint64_t)(state >> 64u)) ^ (uint64_t)state, state >> 122u);
}

uint64_t pcg64_random_r(pcg64_random_t *rng)
{
    pcg_setseq_128_step_r(rng);
    return pcg_output_xsl_rr_128_64(rng->state);
}

void pcg64_srandom_r(pcg64_random_t *rng, pcg128_t initstate, pcg128_t initseq)
{
    rng->state = 0U;
    rng->inc = (initseq << 1u) | 1u;
    pcg_setseq_128_step_r(rng);
    rng->state += initstate;
    pcg_setseq_128_step_r(rng);
}
