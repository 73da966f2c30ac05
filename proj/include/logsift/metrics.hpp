#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace logsift {

// All character-level metrics work on bytes.

std::size_t lcs_length(std::string_view a, std::string_view b);

/// 2·LCS / (|a| + |b|). 1.0 for two empty strings.
double avg_similarity(std::string_view a, std::string_view b);

/// Arithmetic mean of avg_similarity over pairs; 0.0 for no pairs.
double mean_similarity(const std::vector<std::pair<std::string, std::string>>& pairs);

/// Unit-cost insert/delete/substitute distance.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// Distance / max(|a|, |b|); 0.0 when both are empty.
double levenshtein_norm(std::string_view a, std::string_view b);

/// Whitespace tokens with surrounding punctuation stripped and lowercased;
/// tokens that are pure punctuation disappear.
std::vector<std::string> wer_tokens(std::string_view text);

/// Word-level edit distance between token sequences.
std::size_t word_edit_distance(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

/// (S + D + I) / N_ref as a fraction (0.25 == 25 %).
/// Throws Error{EmptyReference} when the reference has no words.
double word_error_rate(std::string_view ref, std::string_view hyp);

}  // namespace logsift
