#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logsift/core.hpp"
#include "logsift/random.hpp"

namespace logsift {

/// Variable classes recognized by the masker.
enum class MaskClass : std::uint8_t { None, Num, Hex, Ip, Ts, Path };

/// "§NUM", "§HEX", "§IP", "§TS", "§PATH"; empty for None.
std::string_view mask_marker(MaskClass c) noexcept;

/// Classifies a bare token (no surrounding punctuation handling).
MaskClass classify_value(std::string_view token) noexcept;

/// Where inside a whitespace token the variable sits, if anywhere.
struct MaskedSpan {
  MaskClass cls = MaskClass::None;
  std::size_t offset = 0;  // start of the variable part
  std::size_t length = 0;
};

/// Resolves a whitespace token: whole token, then with wrapping punctuation
/// stripped, then the value of an embedded `key=value`.
MaskedSpan locate_variable(std::string_view token) noexcept;

/// Masks one whitespace token; returns it unchanged when nothing fires.
std::string mask_token(std::string_view token);

/// Masks every variable token of a message; output tokens are joined by one
/// space.
std::string mask(std::string_view message);

struct Signature {
  std::uint64_t key = 0;  // fnv1a64(masked_form)
  std::string masked_form;
  std::size_t token_count = 0;
};

Signature make_signature(std::string_view message);

struct SignatureGroup {
  Signature signature;
  std::uint64_t member_count = 0;
  std::vector<RawLogRecord> representatives;  // reservoir, size min(n, member_count)
  std::uint64_t reservoir_seed = 0;
};

/// Streaming grouper. Records are fed in input order; each group keeps a
/// seeded reservoir sample of its members (Algorithm R), so the result
/// depends only on (input order, n_samples, seed).
class SignatureGrouper {
 public:
  SignatureGrouper(std::size_t n_samples, std::uint64_t seed);

  void add(const RawLogRecord& record);

  /// Masks the batch on up to `threads` workers, then folds it in order.
  /// Produces the same state as calling add() on each record.
  void add_batch(std::span<const RawLogRecord> batch, unsigned threads);

  std::uint64_t record_count() const noexcept { return records_; }
  std::size_t group_count() const noexcept { return groups_.size(); }

  /// Groups sorted by descending member_count, then masked_form.
  /// Throws Error{EmptyInput} when nothing was added.
  std::vector<SignatureGroup> finish() const;

 private:
  void fold(const RawLogRecord& record, Signature&& sig);

  std::size_t n_samples_;
  std::uint64_t seed_;
  std::uint64_t records_ = 0;
  std::vector<SignatureGroup> groups_;
  std::vector<SplitMix64> rngs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Batch convenience wrapper around SignatureGrouper.
std::vector<SignatureGroup> group(std::span<const RawLogRecord> records, std::size_t n_samples,
                                  std::uint64_t seed, unsigned threads = 1);

}  // namespace logsift
