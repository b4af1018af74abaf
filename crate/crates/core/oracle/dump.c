/*
   Oracle dump driver: writes the first n outputs of a reference generator
   as raw little-endian records (u32 or IEEE-754 f64), applying the same
   seed-expansion and output-composition rules as the Rust crate.

   usage: oracle_dump <algo> <seed> <u32|f64> <n> <out> [pcg_initseq_hex]
          oracle_dump kat
*/

#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include "oracle.h"

#define PCG32_DEFAULT_INC 0xda3e39cb94b95bdbULL
#define PCG64_DEFAULT_INC_HI 0x1ULL
#define PCG64_DEFAULT_INC_LO 0xda3e39cb94b95bdbULL

static const char *algo;
static int have_initseq = 0;
static uint64_t initseq_arg = 0;

static pcg32_random_t pcg32;
static pcg64_random_t pcg64;
static int pcg64_have_hi = 0;
static uint32_t pcg64_hi = 0;
static philox4x32_ctr_t ph_ctr;
static philox4x32_key_t ph_key;
static philox4x32_ctr_t ph_out;
static int ph_idx = 4;

static void seed_all(uint64_t seed)
{
    if (!strcmp(algo, "mt19937")) {
        init_genrand((unsigned long)(uint32_t)seed);
    } else if (!strcmp(algo, "well19937a")) {
        unsigned int init[624];
        mt_fill_state((uint32_t)seed, init);
        InitWELLRNG19937a(init);
    } else if (!strcmp(algo, "pcg32")) {
        uint64_t seq = have_initseq ? initseq_arg : (PCG32_DEFAULT_INC >> 1);
        pcg32_srandom_r(&pcg32, seed, seq);
    } else if (!strcmp(algo, "pcg64")) {
        pcg128_t def = (((pcg128_t)PCG64_DEFAULT_INC_HI) << 64) | PCG64_DEFAULT_INC_LO;
        pcg128_t seq = have_initseq ? (pcg128_t)initseq_arg : (def >> 1);
        pcg64_srandom_r(&pcg64, (pcg128_t)seed, seq);
    } else if (!strcmp(algo, "philox4x32_10")) {
        memset(&ph_ctr, 0, sizeof ph_ctr);
        ph_key.v[0] = (uint32_t)seed;
        ph_key.v[1] = (uint32_t)(seed >> 32);
    } else if (!strcmp(algo, "mrg32k3a")) {
        double s[6];
        uint64_t r1 = seed % 4294967087ULL, r2 = seed % 4294944443ULL;
        if (r1 == 0 || r2 == 0) {
            int i;
            for (i = 0; i < 6; i++) s[i] = 12345.0;
        } else {
            s[0] = s[1] = s[2] = (double)r1;
            s[3] = s[4] = s[5] = (double)r2;
        }
        MRG32k3a_seed(s);
    } else {
        fprintf(stderr, "unknown algo %s\n", algo);
        exit(2);
    }
}

static uint32_t next_u32(void)
{
    if (!strcmp(algo, "mt19937")) return (uint32_t)genrand_int32();
    if (!strcmp(algo, "well19937a")) return well19937a_u32();
    if (!strcmp(algo, "pcg32")) return pcg32_random_r(&pcg32);
    if (!strcmp(algo, "pcg64")) {
        if (pcg64_have_hi) { pcg64_have_hi = 0; return pcg64_hi; }
        uint64_t v = pcg64_random_r(&pcg64);
        pcg64_hi = (uint32_t)(v >> 32);
        pcg64_have_hi = 1;
        return (uint32_t)v;
    }
    if (!strcmp(algo, "philox4x32_10")) {
        if (ph_idx == 4) {
            ph_out = philox4x32_R(10, ph_ctr, ph_key);
            philox4x32_incr(&ph_ctr);
            ph_idx = 0;
        }
        return ph_out.v[ph_idx++];
    }
    fprintf(stderr, "%s has no u32 output\n", algo);
    exit(2);
}

static double next_f64(void)
{
    if (!strcmp(algo, "mt19937")) return genrand_res53();
    if (!strcmp(algo, "mrg32k3a")) return MRG32k3a();
    if (!strcmp(algo, "pcg64")) return (double)(pcg64_random_r(&pcg64) >> 11) * (1.0 / 9007199254740992.0);
    {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (double)(((hi << 32) | lo) >> 11) * (1.0 / 9007199254740992.0);
    }
}

static void put_le(FILE *f, uint64_t v, int bytes)
{
    unsigned char b[8];
    int i;
    for (i = 0; i < bytes; i++) b[i] = (unsigned char)(v >> (8 * i));
    fwrite(b, 1, bytes, f);
}

static int kat(void)
{
    philox4x32_ctr_t c = {{0, 0, 0, 0}};
    philox4x32_key_t k = {{0, 0}};
    philox4x32_ctr_t o = philox4x32_R(10, c, k);
    printf("philox4x32_10 ctr=0 key=0: %08x %08x %08x %08x\n", o.v[0], o.v[1], o.v[2], o.v[3]);
    c.v[0] = c.v[1] = c.v[2] = c.v[3] = 0xffffffff;
    k.v[0] = k.v[1] = 0xffffffff;
    o = philox4x32_R(10, c, k);
    printf("philox4x32_10 ctr=f key=f: %08x %08x %08x %08x\n", o.v[0], o.v[1], o.v[2], o.v[3]);
    c.v[0] = 0x243f6a88; c.v[1] = 0x85a308d3; c.v[2] = 0x13198a2e; c.v[3] = 0x03707344;
    k.v[0] = 0xa4093822; k.v[1] = 0x299f31d0;
    o = philox4x32_R(10, c, k);
    printf("philox4x32_10 ctr=pi key=pi: %08x %08x %08x %08x\n", o.v[0], o.v[1], o.v[2], o.v[3]);

    init_genrand(5489UL);
    printf("mt19937 seed 5489 first: %lu\n", genrand_int32());

    pcg32_srandom_r(&pcg32, 42u, 54u);
    printf("pcg32 42/54:");
    for (int i = 0; i < 6; i++) printf(" 0x%08x", pcg32_random_r(&pcg32));
    printf("\n");

    pcg64_srandom_r(&pcg64, 42u, 54u);
    printf("pcg64 42/54:");
    for (int i = 0; i < 3; i++) printf(" 0x%016llx", (unsigned long long)pcg64_random_r(&pcg64));
    printf("\n");

    {
        double s[6] = {12345, 12345, 12345, 12345, 12345, 12345};
        MRG32k3a_seed(s);
        printf("mrg32k3a 12345x6 first: %.17g\n", MRG32k3a());
    }
    return 0;
}

int main(int argc, char **argv)
{
    if (argc == 2 && !strcmp(argv[1], "kat")) return kat();
    if (argc < 6) {
        fprintf(stderr, "usage: %s <algo> <seed> <u32|f64> <n> <out> [pcg_initseq_hex]\n", argv[0]);
        return 2;
    }
    algo = argv[1];
    uint64_t seed = strtoull(argv[2], NULL, 10);
    int is_f64 = !strcmp(argv[3], "f64");
    unsigned long long n = strtoull(argv[4], NULL, 10);
    if (argc > 6) { have_initseq = 1; initseq_arg = strtoull(argv[6], NULL, 16); }

    seed_all(seed);
    FILE *f = fopen(argv[5], "wb");
    if (!f) { perror(argv[5]); return 1; }
    for (unsigned long long i = 0; i < n; i++) {
        if (is_f64) {
            double d = next_f64();
            uint64_t bits;
            memcpy(&bits, &d, 8);
            put_le(f, bits, 8);
        } else {
            put_le(f, next_u32(), 4);
        }
    }
    fclose(f);
    return 0;
}
