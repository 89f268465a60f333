#ifndef MDL_IO_HPP
#define MDL_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdl/models.hpp"
#include "mdl/regress.hpp"
#include "mdl/rng.hpp"
#include "mdl/select.hpp"
#include "mdl/universal.hpp"

namespace mdl::io {

/// Malformed input. `line` is 1-based; `offset` is the byte offset in the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", offset " +
                           std::to_string(offset) + ")"),
        line_(line),
        offset_(offset) {}
  std::size_t line() const { return line_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Sequence files: ASCII '0'/'1'; whitespace is ignored, anything else is
/// an error.
inline BinarySequence parse_sequence(std::string_view text) {
  std::vector<std::uint8_t> v;
  v.reserve(text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '0' || c == '1') {
      v.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c == '\n') {
      ++line;
    } else if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v') {
      throw ParseError("unexpected byte 0x" + [&] {
        std::ostringstream h;
        h << std::hex << std::setw(2) << std::setfill('0')
          << static_cast<unsigned>(static_cast<unsigned char>(c));
        return h.str();
      }() + " in sequence", line, i);
    }
  }
  if (v.empty()) throw ParseError("sequence is empty", line, text.size());
  return BinarySequence(std::move(v));
}

inline std::string format_sequence(const BinarySequence& x, std::size_t width = 80) {
  std::string out;
  out.reserve(x.size() + x.size() / width + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back(static_cast<char>('0' + x[i]));
    if ((i + 1) % width == 0 || i + 1 == x.size()) out.push_back('\n');
  }
  return out;
}

inline void write_sequence_file(const std::string& path, const BinarySequence& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_sequence(x);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// CSV with header `x,y` and one decimal-dot point per line. Blank lines
/// are skipped.
inline RegressionData parse_csv(std::string_view text) {
  std::vector<RegressionPoint> pts;
  std::size_t line = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    const std::string_view raw = text.substr(pos, end - pos);
    const std::string_view row = detail::trim(raw);
    const std::size_t offset = pos;
    pos = end + 1;
    if (row.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!header_seen) {
      if (row != "x,y") throw ParseError("expected header 'x,y'", line, offset);
      header_seen = true;
      continue;
    }
    const std::size_t comma = row.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected two fields", line, offset);
    RegressionPoint p;
    if (!detail::parse_double(row.substr(0, comma), p.x) ||
        !detail::parse_double(row.substr(comma + 1), p.y)) {
      throw ParseError("malformed number", line, offset);
    }
    pts.push_back(p);
    if (end == text.size()) break;
  }
  if (!header_seen) throw ParseError("missing header 'x,y'", 1, 0);
  if (pts.empty()) throw ParseError("no data rows", line, text.size());
  return RegressionData(std::move(pts));
}

inline std::string format_csv(const RegressionData& data) {
  std::ostringstream out;
  out << "x,y\n" << std::setprecision(17);
  for (const auto& p : data.points()) out << p.x << ',' << p.y << '\n';
  return out.str();
}

/// Synthetic sequences:
///   repeat:<bits>               the pattern, repeated and truncated to n
///   bernoulli:<p>               i.i.d. with P(1) = p
///   markov:<k>:<t0>,...,<t_m>   k-th order chain, t_j = P(1 | context j),
///                               2^k entries; the first k symbols are fair coin flips
inline BinarySequence generate_sequence(std::string_view spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_sequence: n must be >= 1");
  auto bad = [&](const std::string& why) {
    return std::invalid_argument("generate_sequence: malformed spec '" + std::string(spec) +
                                 "': " + why);
  };
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) throw bad("missing ':'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  std::vector<std::uint8_t> v(n);
  Rng rng(seed);
  if (kind == "repeat") {
    if (rest.empty()) throw bad("empty pattern");
    for (char c : rest) {
      if (c != '0' && c != '1') throw bad("pattern must be 0/1");
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(rest[i % rest.size()] - '0');
  } else if (kind == "bernoulli") {
    double p = 0.0;
    if (!detail::parse_double(rest, p) || p < 0.0 || p > 1.0) throw bad("p must lie in [0,1]");
    for (auto& s : v) s = rng.bernoulli(p) ? 1 : 0;
  } else if (kind == "markov") {
    const std::size_t c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw bad("expected markov:<k>:<table>");
    unsigned k = 0;
    const std::string_view ks = rest.substr(0, c2);
    auto [ptr, ec] = std::from_chars(ks.data(), ks.data() + ks.size(), k);
    if (ec != std::errc() || ptr != ks.data() + ks.size() || k > 16) throw bad("bad order");
    std::vector<double> table;
    std::string_view t = rest.substr(c2 + 1);
    while (true) {
      const std::size_t comma = t.find(',');
      double p = 0.0;
      if (!detail::parse_double(t.substr(0, comma), p) || p < 0.0 || p > 1.0) {
        throw bad("table entries must lie in [0,1]");
      }
      table.push_back(p);
      if (comma == std::string_view::npos) break;
      t.remove_prefix(comma + 1);
    }
    if (table.size() != (std::size_t{1} << k)) {
      throw bad("need " + std::to_string(std::size_t{1} << k) + " table entries");
    }
    const std::size_t mask = table.size() - 1;
    std::size_t ctx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = i < k ? 0.5 : table[ctx];
      v[i] = rng.bernoulli(p) ? 1 : 0;
      ctx = ((ctx << 1) | v[i]) & mask;
    }
  } else {
    throw bad("unknown kind '" + std::string(kind) + "'");
  }
  return BinarySequence(std::move(v));
}

/// Everything one CLI invocation reports.
struct RunReport {
  std::string command;
  std::size_t n = 0;
  std::string source;
  std::vector<UniversalCodeReport> models;
  std::optional<SelectionRanking> ranking;
  std::string selected;
  Bits confidence = Bits::infinity();
  std::vector<std::string> warnings;
};

namespace detail {

inline nlohmann::json bits_json(Bits b) {
  const double v = b.value();
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline Bits bits_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Bits(j.get<double>());
  if (j.is_null()) return Bits::infinity();
  const auto s = j.get<std::string>();
  if (s == "+inf" || s == "inf") return Bits::infinity();
  if (s == "-inf") return Bits(-kInf);
  if (s == "nan") return Bits(std::nan(""));
  throw std::invalid_argument("not a codelength: " + s);
}

inline CodeKind code_kind_from_string(const std::string& s) {
  for (auto k : {CodeKind::NmlExact, CodeKind::NmlAsymptotic, CodeKind::Bayes, CodeKind::TwoPart,
                 CodeKind::PlugIn, CodeKind::MetaTwoPart, CodeKind::MaxLikelihood}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown code kind: " + s);
}

}  // namespace detail

/// Stable keys: command, n, models[{id, code, data_fit_bits, complexity_bits,
/// total_bits, flags}], selected, confidence_bits, warnings. Non-finite
/// lengths are written as the strings "+inf", "-inf" or "nan".
inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["n"] = r.n;
  if (!r.source.empty()) j["source"] = r.source;
  j["models"] = nlohmann::json::array();
  for (const auto& m : r.models) {
    j["models"].push_back({{"id", m.model},
                           {"code", to_string(m.code)},
                           {"data_fit_bits", detail::bits_json(m.data_fit)},
                           {"complexity_bits", detail::bits_json(m.complexity)},
                           {"total_bits", detail::bits_json(m.total)},
                           {"flags", m.flags}});
  }
  j["selected"] = r.selected;
  j["confidence_bits"] = detail::bits_json(r.confidence);
  if (r.ranking) {
    auto& arr = j["ranking"] = nlohmann::json::array();
    for (const auto& e : r.ranking->entries) {
      arr.push_back({{"id", e.id},
                     {"index", e.index},
                     {"index_code_bits", detail::bits_json(e.index_code)},
                     {"code_total_bits", detail::bits_json(e.code_total)},
                     {"grand_total_bits", detail::bits_json(e.grand_total)}});
    }
  }
  j["warnings"] = r.warnings;
  return j;
}

inline RunReport run_report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  if (j.contains("source")) r.source = j["source"].get<std::string>();
  for (const auto& m : j.at("models")) {
    UniversalCodeReport u;
    u.model = m.at("id").get<std::string>();
    u.code = detail::code_kind_from_string(m.at("code").get<std::string>());
    u.data_fit = detail::bits_from_json(m.at("data_fit_bits"));
    u.complexity = detail::bits_from_json(m.at("complexity_bits"));
    u.total = detail::bits_from_json(m.at("total_bits"));
    u.flags = m.at("flags").get<std::vector<std::string>>();
    r.models.push_back(std::move(u));
  }
  r.selected = j.at("selected").get<std::string>();
  r.confidence = detail::bits_from_json(j.at("confidence_bits"));
  if (j.contains("ranking")) {
    SelectionRanking sr;
    for (const auto& e : j["ranking"]) {
      RankedModel m;
      m.id = e.at("id").get<std::string>();
      m.index = e.at("index").get<std::size_t>();
      m.index_code = detail::bits_from_json(e.at("index_code_bits"));
      m.code_total = detail::bits_from_json(e.at("code_total_bits"));
      m.grand_total = detail::bits_from_json(e.at("grand_total_bits"));
      sr.entries.push_back(std::move(m));
    }
    if (!sr.entries.empty()) {
      sr.selected = sr.entries.front().id;
      sr.selected_index = sr.entries.front().index;
    }
    sr.confidence = r.confidence;
    r.ranking = std::move(sr);
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

inline std::string format_bits(Bits b) {
  if (b.is_infinite()) return b.value() > 0 ? "+inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << b.value();
  return os.str();
}

/// Tab-separated rendering: one row per model, then summary rows.
inline std::string to_tsv(const RunReport& r) {
  std::ostringstream out;
  out << "# " << r.command << "\tn=" << r.n << '\n';
  out << "id\tcode\tdata_fit_bits\tcomplexity_bits\ttotal_bits\tflags\n";
  for (const auto& m : r.models) {
    out << m.model << '\t' << to_string(m.code) << '\t' << format_bits(m.data_fit) << '\t'
        << format_bits(m.complexity) << '\t' << format_bits(m.total) << '\t';
    for (std::size_t i = 0; i < m.flags.size(); ++i) out << (i ? ";" : "") << m.flags[i];
    out << '\n';
  }
  if (r.ranking) {
    out << "rank\tid\tindex_code_bits\tcode_total_bits\tgrand_total_bits\n";
    std::size_t rank = 1;
    for (const auto& e : r.ranking->entries) {
      out << rank++ << '\t' << e.id << '\t' << format_bits(e.index_code) << '\t'
          << format_bits(e.code_total) << '\t' << format_bits(e.grand_total) << '\n';
    }
  }
  if (!r.selected.empty()) {
    out << "selected\t" << r.selected << '\n';
    out << "confidence_bits\t" << format_bits(r.confidence) << '\n';
  }
  for (const auto& w : r.warnings) out << "warning\t" << w << '\n';
  return out.str();
}

}  // namespace mdl::io

#endif  // MDL_IO_HPP
