#pragma once

// Binary index files. Layout (all integers little-endian):
//
//   magic "GSI1" | format version u32 | 12 sections | CRC32 u32
//
// Each section is a u64 payload length followed by the payload; the sections
// appear in this fixed order:
//
//   PARAMS        sigma u64, c u32, q u64, seed u64, mode u8, sentinel u8,
//                 n u64 (original text length), z u64, char_map 256 x i16
//   PARSE         z phrase records: start u64, copy_len u64, source_start
//                 u64, trailing u16 (0xFFFF = absent)
//   SLP_S         rule count u64, root u32, rule records: tag u8 (0 terminal,
//                 1 pair) + payload (byte u8 | left u32 right u32)
//   SLP_SPRIME    same encoding
//   SPRIME_MAPS   radius u64, text (u64 length + bytes), intervals (u64
//                 count + s_begin/s_end/sp_begin u64 each), boundary
//                 positions (u64 count + u64 each)
//   BOOKMARKS     levels (u64 count + u64 each), anchor pairs (u64 count +
//                 right/left anchors: v u32, w u32, off u64)
//   FP_BOOKMARKS  same encoding (empty counts in verify mode)
//   TRIE_REV      kind u8, sentinel u8, has_fps u8, leaf order (u64 count +
//                 u32 each), node count u64, preorder node records: key u32,
//                 path_len u64, rank_lo u32, rank_hi u32, attached u32,
//                 fp hash/pow/len u64 each, child count u32
//   TRIE_SUF      same encoding
//   GRID          z u64, y-sequence u32 each, payload-by-y u32 each, node
//                 count u64, wavelet records: lo u32, hi u32, left u32,
//                 right u32, bit count u64, packed bits u64 words
//   SOURCES       entry count u64, records: src_start u64, src_end u64,
//                 phrase_start u64, phrase u32
//   SYMBOL_FPS    forward count u64 + hash/pow/len u64 each, backward same
//
// The trailing CRC32 (IEEE) covers every byte before it. Loading verifies
// magic, version, checksum, and framing before decoding, and cross-checks
// the sections against each other; every failure is a format-error carrying
// the byte offset of the offending field.

#include <cstdint>
#include <string>
#include <vector>

#include "gsi/common.hpp"
#include "gsi/index.hpp"

namespace gsi {

inline constexpr char kIndexMagic[4] = {'G', 'S', 'I', '1'};
inline constexpr uint32_t kIndexFormatVersion = 1;

// Serializes the index; byte-identical for equal indexes.
Bytes save_index(const SelfIndex& idx);

// Parses an index file image. Malformed input -> format-error with the byte
// offset of the problem.
SelfIndex load_index(ByteView bytes);

// Section names and payload sizes of a file image, in file order (frame
// inspection only; the checksum is still enforced).
std::vector<std::pair<std::string, uint64_t>> section_sizes(ByteView bytes);

}  // namespace gsi
