#pragma once

#include <optional>

#include "flr/constructor.hpp"

namespace flr {

// One measured point: exact network output against a certified enclosure of
// the target value.
struct SampleRecord {
  std::vector<Dyadic> x;
  Dyadic phi;
  Interval f;
  Rational err_hi;  // certified upper bound of |phi - f(x)|
};

struct ErrorReport {
  std::uint64_t sample_count = 0;
  Dyadic max_abs_error;  // certified upper bound of the max over the samples
  std::vector<Dyadic> argmax;
  bool has_bound = false;
  Dyadic bound;
  bool pass = true;  // max_abs_error <= bound; true when no bound given
  // Within-cell variation omega(sqrt(d)/K): the sampling design (corners and
  // centers of every cell) measures the rest of the sup exactly, so this
  // residual is reported separately rather than folded into max_abs_error.
  bool has_modulus_term = false;
  Dyadic modulus_term;
  bool seeded = false;
  std::uint64_t seed = 0;
  std::vector<SampleRecord> records;  // filled on request
};

struct SampleSet {
  std::vector<std::vector<Dyadic>> pts;
  std::optional<std::uint64_t> seed;
};

// per_axis points per coordinate, endpoints included, snapped to dyadics.
SampleSet grid_points(int d, long per_axis, const DomainBox& box);
// Coordinates with 62 fractional bits drawn from a seeded mt19937_64.
SampleSet random_points(int d, std::uint64_t count, std::uint64_t seed, const DomainBox& box);
// Minimum-norm corner and center of every cell of the K-per-axis grid,
// snapped to dyadics inside their cell, plus the top vertex of the cube.
SampleSet cell_anchor_points(int d, long K, const DomainBox& box);
SampleSet merge_samples(std::vector<SampleSet> parts);

ErrorReport measure_sup_error(const Network& net, const TargetFunction& f,
                              const SampleSet& samples,
                              const std::optional<Dyadic>& bound = std::nullopt,
                              bool keep_records = false);

struct CheckOptions {
  std::uint64_t random_count = 1000;
  std::uint64_t seed = 0x5eed;
  long extra_grid = 0;  // additional per-axis grid when > 1
  bool keep_records = false;
};

// Rebuilds the target named by the certificate, checks the audited sizes
// against the certificate, and measures over cell anchors plus seeded random
// points.  pass means the measured maximum stays within cert.bound.
ErrorReport check_certificate(const Network& net, const Certificate& cert,
                              const CheckOptions& opts = {});

// Bit-level gadget checks against the pure index-slicing oracle
// (oracle_extract; no network code on the reference side).
struct BitCheckReport {
  std::string level;  // "block" | "locator" | "fitter"
  int N = 0;
  std::int64_t param = 0;  // J for block, L otherwise
  bool exhaustive = false;
  std::uint64_t cases = 0;  // (string, index) pairs evaluated
  std::uint64_t failures = 0;
  bool seeded = false;
  std::uint64_t seed = 0;
  std::string first_failure;
  AuditReport audit;

  bool pass() const { return failures == 0; }
};

// All 2^(N*J) strings when that count is <= cap, else random_strings seeded
// draws; every block index n is checked for every string.
BitCheckReport check_block_extractor(int N, std::int64_t J, std::uint64_t cap = 1 << 16,
                                     std::uint64_t random_strings = 1000,
                                     std::uint64_t seed = 1);
// Same policy over strings of length N^L with every index m checked.
BitCheckReport check_bit_locator(int N, int L, std::uint64_t cap = 1 << 16,
                                 std::uint64_t random_strings = 1000,
                                 std::uint64_t seed = 1);
// `tables` random bit tables; each fitted network is checked at every index.
BitCheckReport check_point_fitter(int N, int L, std::uint64_t tables = 100,
                                  std::uint64_t seed = 1);

struct MemorizationReport {
  int N = 0, L = 0;
  long points = 0;        // N^L
  int width = 0, depth = 0;
  std::int64_t constant_bits = 0;  // declared fractional bits of the table constant
  std::uint64_t seed = 0;
  bool all_exact = false;
};
// Fits N^L random bits and re-reads every one of them exactly.
MemorizationReport memorization_demo(int N, int L, std::uint64_t seed);

struct DivergenceRecord {
  std::vector<Dyadic> x;
  int first_layer = -1;  // hidden layer where the traces first part; depth() = output
  double float_out = 0;
  double exact_out = 0;
};
struct DivergenceReport {
  std::uint64_t points = 0;
  std::uint64_t divergent = 0;  // network output differs beyond tolerance
  Dyadic tolerance;             // 2^-40
  std::vector<DivergenceRecord> records;  // capped at 32
};
// Compares the binary64 backend against exact evaluation, point by point.
DivergenceReport float_divergence_probe(const Network& net,
                                        const std::vector<std::vector<Dyadic>>& points);

}  // namespace flr
