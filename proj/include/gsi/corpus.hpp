#pragma once

// Deterministic generator for highly repetitive test corpora: a random base
// string over {a,c,g,t} followed by `copies` mutated copies, where each copy
// substitutes every position independently with the given rate (always to a
// *different* character). Byte-for-byte reproducible for a fixed seed on any
// platform (raw mt19937_64 output with rejection sampling; no
// distribution-object variance).

#include <cstdint>

#include "gsi/common.hpp"

namespace gsi {

Bytes gen_corpus(uint64_t base_len, uint64_t copies, double mutation_rate,
                 uint64_t seed);

}  // namespace gsi
