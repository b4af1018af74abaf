#ifndef PRNGLAB_ORACLE_H
#define PRNGLAB_ORACLE_H

#include <stdint.h>

typedef __uint128_t pcg128_t;

typedef struct { uint64_t state; uint64_t inc; } pcg32_random_t;
typedef struct { pcg128_t state; pcg128_t inc; } pcg64_random_t;

typedef struct { uint32_t v[4]; } philox4x32_ctr_t;
typedef struct { uint32_t v[2]; } philox4x32_key_t;

void init_genrand(unsigned long s);
unsigned long genrand_int32(void);
double genrand_res53(void);
void mt_fill_state(unsigned int seed, unsigned int *out);

void InitWELLRNG19937a(unsigned int *init);
unsigned int well19937a_u32(void);
double WELLRNG19937a(void);

uint32_t pcg32_random_r(pcg32_random_t *rng);
void pcg32_srandom_r(pcg32_random_t *rng, uint64_t initstate, uint64_t initseq);
uint64_t pcg64_random_r(pcg64_random_t *rng);
void pcg64_srandom_r(pcg64_random_t *rng, pcg128_t initstate, pcg128_t initseq);

philox4x32_ctr_t philox4x32_R(unsigned int R, philox4x32_ctr_t ctr, philox4x32_key_t key);
void philox4x32_incr(philox4x32_ctr_t *ctr);

void MRG32k3a_seed(const double s[6]);
double MRG32k3a(void);

#endif
