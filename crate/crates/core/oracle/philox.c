/*
   Reference Philox4x32-10, transcribed from Random123 (philox.h) with the
   macro expansion done by hand for the 4x32 width.
*/

#include "oracle.h"

#define PHILOX_M4x32_0 ((uint32_t)0xD2511F53)
#define PHILOX_M4x32_1 ((uint32_t)0xCD9E8D57)
#define PHILOX_W32_0 ((uint32_t)0x9E3779B9)
#define PHILOX_W32_1 ((uint32_t)0xBB67AE85)

static inline uint32_t mulhilo32(uint32_t a, uint32_t b, uint32_t *hip)
{
    uint64_t product = ((uint64_t)a) * ((uint64_t)b);
    *hip = (uint32_t)(product >> 32);
    return (uint32_t)product;
}

static inline philox4x32_ctr_t _philox4x32round(philox4x32_ctr_t ctr, philox4x32_key_t key)
{
    uint32_t hi0;
    uint32_t hi1;
    uint32_t lo0 = mulhilo32(PHILOX_M4x32_0, ctr.v[0], &hi0);
    uint32_t lo1 = mulhilo32(PHILOX_M4x32_1, ctr.v[2], &hi1);
    philox4x32_ctr_t out = {{hi1 ^ ctr.v[1] ^ key.v[0], lo1, hi0 ^ ctr.v[3] ^ key.v[1], lo0}};
    return out;
}

static inline philox4x32_key_t _philox4x32bumpkey(philox4x32_key_t key)
{
    key.v[0] += PHILOX_W32_0;
    key.v[1] += PHILOX_W32_1;
    return key;
}

philox4x32_ctr_t philox4x32_R(unsigned int R, philox4x32_ctr_t ctr, philox4x32_key_t key)
{
    if (R > 0) { ctr = _philox4x32round(ctr, key); }
    if (R > 1) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 2) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 3) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 4) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 5) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 6) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 7) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 8) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    if (R > 9) { key = _philox4x32bumpkey(key); ctr = _philox4x32round(ctr, key); }
    return ctr;
}

/* Counter increment with carry across all four words (Random123 incr). */
void philox4x32_incr(philox4x32_ctr_t *ctr)
{
    if (++ctr->v[0]) return;
    if (++ctr->v[1]) return;
    if (++ctr->v[2]) return;
    ++ctr->v[3];
}
