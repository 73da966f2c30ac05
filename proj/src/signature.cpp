#include "logsift/signature.hpp"

#include <algorithm>
#include <cctype>

#include "logsift/parallel.hpp"

namespace logsift {

namespace {

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool is_hex_digit(char c) noexcept {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Consumes exactly `count` digits at s[pos].
bool digits(std::string_view s, std::size_t& pos, std::size_t count) noexcept {
  if (pos + count > s.size()) return false;
  for (std::size_t i = 0; i < count; ++i) {
    if (!is_digit(s[pos + i])) return false;
  }
  pos += count;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) noexcept {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

// HH:MM[:SS[.frac]] then optional zone (Z or +HH[:]MM).
bool time_of_day(std::string_view s, std::size_t& pos, bool need_seconds) noexcept {
  if (!digits(s, pos, 2) || !expect(s, pos, ':') || !digits(s, pos, 2)) return false;
  if (pos < s.size() && s[pos] == ':') {
    ++pos;
    if (!digits(s, pos, 2)) return false;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && is_digit(s[pos])) ++pos;
      if (pos == start) return false;
    }
  } else if (need_seconds) {
    return false;
  }
  if (pos < s.size() && s[pos] == 'Z') {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    ++pos;
    if (!digits(s, pos, 2)) return false;
    expect(s, pos, ':');
    if (!digits(s, pos, 2)) return false;
  }
  return true;
}

bool is_timestamp(std::string_view s) noexcept {
  std::size_t pos = 0;
  if (s.size() >= 10 && s[4] == '-') {
    if (!digits(s, pos, 4) || !expect(s, pos, '-') || !digits(s, pos, 2) || !expect(s, pos, '-') ||
        !digits(s, pos, 2)) {
      return false;
    }
    if (pos == s.size()) return true;
    if (s[pos] != 'T' && s[pos] != '_') return false;
    ++pos;
    return time_of_day(s, pos, false) && pos == s.size();
  }
  // Bare time of day, as in syslog "Mar  1 12:00:00".
  return time_of_day(s, pos, true) && pos == s.size();
}

bool is_ipv4(std::string_view s) noexcept {
  std::size_t pos = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0 && !expect(s, pos, '.')) return false;
    std::size_t start = pos;
    int value = 0;
    while (pos < s.size() && is_digit(s[pos]) && pos - start < 3) {
      value = value * 10 + (s[pos] - '0');
      ++pos;
    }
    if (pos == start || value > 255) return false;
  }
  if (pos == s.size()) return true;
  // Optional :port or /prefix.
  if (s[pos] != ':' && s[pos] != '/') return false;
  ++pos;
  std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  return pos > start && pos == s.size();
}

bool is_ipv6(std::string_view s) noexcept {
  int colons = 0;
  bool hex = false;
  for (char c : s) {
    if (c == ':') {
      ++colons;
    } else if (is_hex_digit(c)) {
      hex = true;
    } else {
      return false;
    }
  }
  return colons >= 2 && hex;
}

bool is_number(std::string_view s) noexcept {
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  if (pos == start) return false;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t frac = pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == frac) return false;
  }
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    std::size_t exp = pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == exp) return false;
  }
  return pos == s.size();
}

// 0x-prefixed: at least 4 hex digits. Unprefixed: at least 4 hex digits with
// at least one decimal digit, so plain words like "deadbeef" or "facade" stay
// literal.
bool is_hex(std::string_view s) noexcept {
  bool prefixed = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
  std::string_view body = prefixed ? s.substr(2) : s;
  if (body.size() < 4) return false;
  bool has_digit = false;
  for (char c : body) {
    if (!is_hex_digit(c)) return false;
    has_digit = has_digit || is_digit(c);
  }
  return prefixed || has_digit;
}

bool is_path(std::string_view s) noexcept {
  return s.size() > 1 && s[0] == '/' && std::any_of(s.begin(), s.end(), is_digit);
}

bool is_open_wrap(char c) noexcept { return c == '(' || c == '[' || c == '{' || c == '"' || c == '\''; }

bool is_close_wrap(char c) noexcept {
  return c == ')' || c == ']' || c == '}' || c == '"' || c == '\'' || c == ',' || c == ';' ||
         c == ':' || c == '.' || c == '!' || c == '?';
}

}  // namespace

std::string_view mask_marker(MaskClass c) noexcept {
  switch (c) {
    case MaskClass::Num: return "§NUM";
    case MaskClass::Hex: return "§HEX";
    case MaskClass::Ip: return "§IP";
    case MaskClass::Ts: return "§TS";
    case MaskClass::Path: return "§PATH";
    case MaskClass::None: break;
  }
  return {};
}

MaskClass classify_value(std::string_view token) noexcept {
  if (token.empty()) return MaskClass::None;
  if (is_timestamp(token)) return MaskClass::Ts;
  if (is_ipv4(token) || is_ipv6(token)) return MaskClass::Ip;
  if (is_number(token)) return MaskClass::Num;
  if (is_hex(token)) return MaskClass::Hex;
  if (is_path(token)) return MaskClass::Path;
  return MaskClass::None;
}

MaskedSpan locate_variable(std::string_view token) noexcept {
  if (MaskClass c = classify_value(token); c != MaskClass::None) return {c, 0, token.size()};

  std::size_t begin = 0, end = token.size();
  while (begin < end && is_open_wrap(token[begin])) ++begin;
  while (end > begin && is_close_wrap(token[end - 1])) --end;
  std::string_view core = token.substr(begin, end - begin);
  if (core.size() != token.size()) {
    if (MaskClass c = classify_value(core); c != MaskClass::None) return {c, begin, core.size()};
  }

  std::size_t eq = core.find('=');
  if (eq != std::string_view::npos && eq > 0 && eq + 1 < core.size()) {
    std::string_view value = core.substr(eq + 1);
    if (MaskClass c = classify_value(value); c != MaskClass::None) {
      return {c, begin + eq + 1, value.size()};
    }
    std::size_t vb = 0, ve = value.size();
    while (vb < ve && is_open_wrap(value[vb])) ++vb;
    while (ve > vb && is_close_wrap(value[ve - 1])) --ve;
    if (vb > 0 || ve < value.size()) {
      if (MaskClass c = classify_value(value.substr(vb, ve - vb)); c != MaskClass::None) {
        return {c, begin + eq + 1 + vb, ve - vb};
      }
    }
  }
  return {};
}

std::string mask_token(std::string_view token) {
  MaskedSpan span = locate_variable(token);
  if (span.cls == MaskClass::None) return std::string(token);
  std::string out;
  out.reserve(token.size() + 4);
  out.append(token.substr(0, span.offset));
  out.append(mask_marker(span.cls));
  out.append(token.substr(span.offset + span.length));
  return out;
}

std::string mask(std::string_view message) {
  std::string out;
  out.reserve(message.size());
  for (std::string_view tok : split_ws(message)) {
    if (!out.empty()) out.push_back(' ');
    out += mask_token(tok);
  }
  return out;
}

Signature make_signature(std::string_view message) {
  Signature sig;
  sig.masked_form = mask(message);
  sig.key = fnv1a64(sig.masked_form);
  sig.token_count = sig.masked_form.empty()
                        ? 0
                        : static_cast<std::size_t>(std::count(sig.masked_form.begin(),
                                                              sig.masked_form.end(), ' ')) + 1;
  return sig;
}

SignatureGrouper::SignatureGrouper(std::size_t n_samples, std::uint64_t seed)
    : n_samples_(n_samples), seed_(seed) {
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
}

void SignatureGrouper::fold(const RawLogRecord& record, Signature&& sig) {
  ++records_;
  auto it = index_.find(sig.masked_form);
  if (it == index_.end()) {
    SignatureGroup g;
    g.reservoir_seed = mix_seed(seed_, sig.key);
    g.member_count = 1;
    g.representatives.push_back(record);
    index_.emplace(sig.masked_form, groups_.size());
    g.signature = std::move(sig);
    rngs_.emplace_back(g.reservoir_seed);
    groups_.push_back(std::move(g));
    return;
  }
  SignatureGroup& g = groups_[it->second];
  const std::uint64_t seen = g.member_count++;
  if (g.representatives.size() < n_samples_) {
    g.representatives.push_back(record);
  } else {
    std::uint64_t j = rngs_[it->second].below(seen + 1);
    if (j < n_samples_) g.representatives[j] = record;
  }
}

void SignatureGrouper::add(const RawLogRecord& record) { fold(record, make_signature(record.message)); }

void SignatureGrouper::add_batch(std::span<const RawLogRecord> batch, unsigned threads) {
  if (threads <= 1) {
    for (const auto& r : batch) add(r);
    return;
  }
  std::vector<Signature> sigs(batch.size());
  parallel_chunks(batch.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) sigs[i] = make_signature(batch[i].message);
  });
  for (std::size_t i = 0; i < batch.size(); ++i) fold(batch[i], std::move(sigs[i]));
}

std::vector<SignatureGroup> SignatureGrouper::finish() const {
  if (records_ == 0) throw Error(ErrorCode::EmptyInput, "no records to group");
  std::vector<SignatureGroup> out = groups_;
  std::sort(out.begin(), out.end(), [](const SignatureGroup& a, const SignatureGroup& b) {
    if (a.member_count != b.member_count) return a.member_count > b.member_count;
    return a.signature.masked_form < b.signature.masked_form;
  });
  return out;
}

std::vector<SignatureGroup> group(std::span<const RawLogRecord> records, std::size_t n_samples,
                                  std::uint64_t seed, unsigned threads) {
  SignatureGrouper grouper(n_samples, seed);
  grouper.add_batch(records, threads);
  return grouper.finish();
}

}  // namespace logsift
