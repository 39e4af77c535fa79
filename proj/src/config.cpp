#include "nilmag/config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <openssl/evp.h>

#include "nilmag/defaults.hpp"
#include "nilmag/error.hpp"
#include "nilmag/output.hpp"

namespace nilmag {
namespace {

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
};

struct Located {
  std::size_t line = 0;
  std::vector<Token> tokens;
};

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& message) {
  fail(ErrorCategory::parse,
       "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message);
}

std::vector<Token> split_tokens(std::string_view text, std::size_t base_column, bool commas) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto is_sep = [commas](char ch) {
    return ch == ' ' || ch == '\t' || (commas && ch == ',');
  };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_sep(text[i])) ++i;
    if (i > start) out.push_back(Token{std::string(text.substr(start, i - start)), base_column + start});
  }
  return out;
}

double parse_double(const Token& tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    parse_error(line, tok.column, "expected a finite number, got '" + tok.text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const Token& tok, std::size_t line) {
  std::uint64_t value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    parse_error(line, tok.column, "expected a non-negative integer, got '" + tok.text + "'");
  }
  return value;
}

bool parse_bool(const Token& tok, std::size_t line) {
  if (tok.text == "true") return true;
  if (tok.text == "false") return false;
  parse_error(line, tok.column, "expected true or false, got '" + tok.text + "'");
}

Rational parse_rational_token(const Token& tok, std::size_t line) {
  try {
    return parse_rational(tok.text);
  } catch (const Error& e) {
    parse_error(line, tok.column, e.what());
  }
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
  });
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"system", {"name", "field_strength", "seed"}},
      {"algebra", {"dim", "labels", "bracket"}},
      {"metric", {"identity", "row"}},
      {"sigma", {"entry"}},
      {"lattice", {"row"}},
      {"extension", {"w_label"}},
      {"integrate", {"step", "t_end", "sample_stride", "state", "k1", "k2"}},
      {"chaos", {"step", "t_end", "renorm_interval", "transient_fraction", "check_convergence", "spectrum"}},
      {"sweep", {"kind", "a", "b", "seeds", "t_end", "threads"}},
      {"sft", {"matrix", "max_period"}},
  };
  return keys;
}

bool repeatable(const std::string& section, const std::string& key) {
  return (section == "algebra" && key == "bracket") || (section == "sigma" && key == "entry") ||
         (key == "row" && (section == "metric" || section == "lattice"));
}

class Parser {
 public:
  ScenarioConfig run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line, line_no);
      if (end == text.size()) break;
      pos = end + 1;
    }
    finish();
    return std::move(cfg_);
  }

 private:
  void handle_line(std::string_view line, std::size_t line_no) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t first = 0;
    while (first < line.size() && (line[first] == ' ' || line[first] == '\t')) ++first;
    std::size_t last = line.size();
    while (last > first && (line[last - 1] == ' ' || line[last - 1] == '\t')) --last;
    if (first == last) return;
    const std::string_view body = line.substr(first, last - first);
    const std::size_t col = first + 1;

    if (body.front() == '[') {
      if (body.back() != ']') parse_error(line_no, col, "unterminated section header");
      std::string name(body.substr(1, body.size() - 2));
      if (!known_keys().count(name)) parse_error(line_no, col + 1, "unknown section '" + name + "'");
      if (!seen_sections_.insert(name).second) parse_error(line_no, col + 1, "duplicate section '" + name + "'");
      section_ = name;
      seen_keys_.clear();
      return;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, col, "expected 'key = value'");
    std::string_view key_view = body.substr(0, eq);
    while (!key_view.empty() && (key_view.back() == ' ' || key_view.back() == '\t')) key_view.remove_suffix(1);
    const std::string key(key_view);
    if (key.empty()) parse_error(line_no, col, "missing key");
    if (section_.empty()) parse_error(line_no, col, "entry outside of any section");
    if (!known_keys().at(section_).count(key)) {
      parse_error(line_no, col, "unknown key '" + key + "' in section [" + section_ + "]");
    }
    if (!repeatable(section_, key) && !seen_keys_.insert(key).second) {
      parse_error(line_no, col, "duplicate key '" + key + "'");
    }

    std::size_t value_start = eq + 1;
    while (value_start < body.size() && (body[value_start] == ' ' || body[value_start] == '\t')) ++value_start;
    const std::string_view value = body.substr(value_start);
    const std::size_t value_col = col + value_start;
    if (value.empty()) parse_error(line_no, value_col, "missing value for '" + key + "'");
    handle_entry(key, value, value_col, line_no);
  }

  static const Token& single(const std::vector<Token>& toks, std::size_t line, std::size_t col) {
    if (toks.size() != 1) parse_error(line, col, "expected a single value");
    return toks.front();
  }

  void handle_entry(const std::string& key, std::string_view value, std::size_t col, std::size_t line) {
    const auto toks = split_tokens(value, col, key != "matrix");
    const std::string& s = section_;
    if (s == "system") {
      if (key == "name") {
        const Token& t = single(toks, line, col);
        if (!valid_name(t.text)) parse_error(line, t.column, "name must use letters, digits, '_', '-', '.'");
        cfg_.name = t.text;
      } else if (key == "field_strength") {
        cfg_.field_strength = parse_double(single(toks, line, col), line);
      } else {
        cfg_.seed = parse_unsigned(single(toks, line, col), line);
      }
    } else if (s == "algebra") {
      if (key == "dim") {
        const Token& t = single(toks, line, col);
        dim_ = parse_unsigned(t, line);
        dim_line_ = line;
        dim_col_ = t.column;
        if (*dim_ == 0) parse_error(line, t.column, "dim must be positive");
      } else if (key == "labels") {
        std::set<std::string> unique;
        for (const auto& t : toks) {
          if (!valid_name(t.text)) parse_error(line, t.column, "invalid label '" + t.text + "'");
          if (!unique.insert(t.text).second) parse_error(line, t.column, "duplicate label '" + t.text + "'");
          cfg_.labels.push_back(t.text);
        }
      } else {
        if (toks.size() != 4) parse_error(line, col, "bracket needs 'Li Lj Lk p/q'");
        brackets_.push_back(Located{line, toks});
      }
    } else if (s == "metric") {
      if (key == "identity") {
        identity_ = parse_bool(single(toks, line, col), line);
        identity_line_ = line;
      } else {
        metric_rows_.push_back(parse_row(toks, line));
      }
    } else if (s == "sigma") {
      if (toks.size() != 3) parse_error(line, col, "entry needs 'Li Lj p/q'");
      sigma_.push_back(Located{line, toks});
    } else if (s == "lattice") {
      if (!cfg_.lattice) cfg_.lattice.emplace();
      cfg_.lattice->push_back(parse_row(toks, line));
    } else if (s == "extension") {
      cfg_.w_label = single(toks, line, col).text;
      w_line_ = line;
      w_col_ = col;
    } else if (s == "integrate") {
      auto& sec = cfg_.integrate;
      if (key == "step") sec.step = parse_double(single(toks, line, col), line);
      if (key == "t_end") sec.t_end = parse_double(single(toks, line, col), line);
      if (key == "sample_stride") sec.sample_stride = parse_unsigned(single(toks, line, col), line);
      if (key == "k1") sec.k1 = parse_double(single(toks, line, col), line);
      if (key == "k2") sec.k2 = parse_double(single(toks, line, col), line);
      if (key == "state") {
        sec.state.emplace();
        for (const auto& t : toks) sec.state->push_back(parse_double(t, line));
      }
    } else if (s == "chaos") {
      auto& sec = cfg_.chaos;
      if (key == "step") sec.step = parse_double(single(toks, line, col), line);
      if (key == "t_end") sec.t_end = parse_double(single(toks, line, col), line);
      if (key == "renorm_interval") sec.renorm_interval = parse_double(single(toks, line, col), line);
      if (key == "transient_fraction") sec.transient_fraction = parse_double(single(toks, line, col), line);
      if (key == "check_convergence") sec.check_convergence = parse_bool(single(toks, line, col), line);
      if (key == "spectrum") sec.spectrum = parse_bool(single(toks, line, col), line);
    } else if (s == "sweep") {
      auto& sec = cfg_.sweep;
      if (key == "kind") {
        const Token& t = single(toks, line, col);
        if (t.text != "orbit" && t.text != "energy") parse_error(line, t.column, "kind must be orbit or energy");
        sec.kind = t.text;
      }
      if (key == "a" || key == "b") {
        auto& list = key == "a" ? sec.a : sec.b;
        list.emplace();
        for (const auto& t : toks) list->push_back(parse_double(t, line));
      }
      if (key == "seeds") {
        sec.seeds.emplace();
        for (const auto& t : toks) sec.seeds->push_back(parse_unsigned(t, line));
      }
      if (key == "t_end") sec.t_end = parse_double(single(toks, line, col), line);
      if (key == "threads") sec.threads = static_cast<unsigned>(parse_unsigned(single(toks, line, col), line));
    } else if (s == "sft") {
      if (key == "matrix") {
        const Token& t = single(toks, line, col);
        try {
          cfg_.sft.matrix = check_matrix_text(t.text);
        } catch (const Error& e) {
          parse_error(line, t.column, e.what());
        }
      } else {
        cfg_.sft.max_period = parse_unsigned(single(toks, line, col), line);
      }
    }
  }

  // Only checks the digit/comma shape; square-ness is checked by symdyn.
  static std::string check_matrix_text(const std::string& text) {
    for (char ch : text) {
      if (ch != '0' && ch != '1' && ch != ',') fail(ErrorCategory::parse, "matrix rows must be 0/1 digits separated by commas");
    }
    return text;
  }

  static RVec parse_row(const std::vector<Token>& toks, std::size_t line) {
    RVec row;
    for (const auto& t : toks) row.push_back(parse_rational_token(t, line));
    return row;
  }

  std::size_t resolve(const Token& t, std::size_t line) const {
    const auto it = std::find(cfg_.labels.begin(), cfg_.labels.end(), t.text);
    if (it == cfg_.labels.end()) parse_error(line, t.column, "unknown label '" + t.text + "'");
    return static_cast<std::size_t>(it - cfg_.labels.begin());
  }

  void finish() {
    if (!seen_sections_.count("algebra")) parse_error(1, 1, "missing [algebra] section");
    if (cfg_.labels.empty()) {
      if (!dim_) parse_error(1, 1, "[algebra] needs dim or labels");
      for (std::size_t i = 0; i < *dim_; ++i) cfg_.labels.push_back("e" + std::to_string(i + 1));
    } else if (dim_ && *dim_ != cfg_.labels.size()) {
      parse_error(dim_line_, dim_col_, "dim does not match the number of labels");
    }

    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (const auto& b : brackets_) {
      std::size_t i = resolve(b.tokens[0], b.line);
      std::size_t j = resolve(b.tokens[1], b.line);
      const std::size_t k = resolve(b.tokens[2], b.line);
      Rational coef = parse_rational_token(b.tokens[3], b.line);
      if (i == j) parse_error(b.line, b.tokens[1].column, "bracket of a basis vector with itself");
      if (i > j) {
        std::swap(i, j);
        coef = -coef;
      }
      if (!seen.insert({i, j, k}).second) parse_error(b.line, b.tokens[0].column, "duplicate bracket entry");
      if (sgn(coef) != 0) cfg_.brackets.push_back(BracketTerm{i, j, k, coef});
    }
    std::sort(cfg_.brackets.begin(), cfg_.brackets.end(), [](const BracketTerm& x, const BracketTerm& y) {
      return std::tie(x.i, x.j, x.k) < std::tie(y.i, y.j, y.k);
    });

    std::set<std::pair<std::size_t, std::size_t>> seen_sigma;
    for (const auto& e : sigma_) {
      std::size_t i = resolve(e.tokens[0], e.line);
      std::size_t j = resolve(e.tokens[1], e.line);
      Rational value = parse_rational_token(e.tokens[2], e.line);
      if (i == j) parse_error(e.line, e.tokens[1].column, "sigma entry on the diagonal");
      if (i > j) {
        std::swap(i, j);
        value = -value;
      }
      if (!seen_sigma.insert({i, j}).second) parse_error(e.line, e.tokens[0].column, "duplicate sigma entry");
      if (sgn(value) != 0) cfg_.sigma.push_back(SigmaTerm{i, j, value});
    }
    std::sort(cfg_.sigma.begin(), cfg_.sigma.end(),
              [](const SigmaTerm& x, const SigmaTerm& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });

    if (identity_ && *identity_ && !metric_rows_.empty()) {
      parse_error(identity_line_, 1, "metric gives both identity = true and rows");
    }
    if (identity_ && !*identity_ && metric_rows_.empty()) {
      parse_error(identity_line_, 1, "identity = false requires metric rows");
    }
    if (!metric_rows_.empty()) cfg_.metric = std::move(metric_rows_);

    if (cfg_.w_label && cfg_.w_label != cfg_.labels.back()) {
      parse_error(w_line_, w_col_, "w_label must name the last basis vector");
    }
  }

  ScenarioConfig cfg_;
  std::string section_;
  std::set<std::string> seen_sections_;
  std::set<std::string> seen_keys_;
  std::optional<std::uint64_t> dim_;
  std::size_t dim_line_ = 0, dim_col_ = 0;
  std::vector<Located> brackets_;
  std::vector<Located> sigma_;
  std::optional<bool> identity_;
  std::size_t identity_line_ = 0;
  std::vector<RVec> metric_rows_;
  std::size_t w_line_ = 0, w_col_ = 0;
};

std::string join_row(const RVec& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ' ';
    out += to_string(row[i]);
  }
  return out;
}

template <class T, class F>
std::string join_list(const std::vector<T>& values, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += fmt(values[i]);
  }
  return out;
}

bool is_identity(const RMatrix& m) { return m == RMatrix::identity(m.rows()); }

}  // namespace

ScenarioConfig parse_config(std::string_view text) { return Parser().run(text); }

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::parse, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const ScenarioConfig& cfg) {
  std::ostringstream out;
  const auto& l = cfg.labels;
  const auto dbl = [](double v) { return format_double(v); };

  out << "[system]\nname = " << cfg.name << '\n';
  if (cfg.field_strength) out << "field_strength = " << format_double(*cfg.field_strength) << '\n';
  if (cfg.seed) out << "seed = " << *cfg.seed << '\n';

  out << "\n[algebra]\ndim = " << l.size() << "\nlabels = " << join_list(l, [](const std::string& s) { return s; })
      << '\n';
  for (const auto& b : cfg.brackets) {
    out << "bracket = " << l[b.i] << ' ' << l[b.j] << ' ' << l[b.k] << ' ' << to_string(b.coef) << '\n';
  }

  out << "\n[metric]\n";
  if (!cfg.metric) {
    out << "identity = true\n";
  } else {
    for (const auto& row : *cfg.metric) out << "row = " << join_row(row) << '\n';
  }

  if (!cfg.sigma.empty()) {
    out << "\n[sigma]\n";
    for (const auto& s : cfg.sigma) out << "entry = " << l[s.i] << ' ' << l[s.j] << ' ' << to_string(s.value) << '\n';
  }
  if (cfg.lattice) {
    out << "\n[lattice]\n";
    for (const auto& row : *cfg.lattice) out << "row = " << join_row(row) << '\n';
  }
  if (cfg.w_label) out << "\n[extension]\nw_label = " << *cfg.w_label << '\n';

  const auto& in = cfg.integrate;
  if (in.step || in.t_end || in.sample_stride || in.state || in.k1 || in.k2) {
    out << "\n[integrate]\n";
    if (in.step) out << "step = " << dbl(*in.step) << '\n';
    if (in.t_end) out << "t_end = " << dbl(*in.t_end) << '\n';
    if (in.sample_stride) out << "sample_stride = " << *in.sample_stride << '\n';
    if (in.state) out << "state = " << join_list(*in.state, dbl) << '\n';
    if (in.k1) out << "k1 = " << dbl(*in.k1) << '\n';
    if (in.k2) out << "k2 = " << dbl(*in.k2) << '\n';
  }
  const auto& ch = cfg.chaos;
  if (ch.step || ch.t_end || ch.renorm_interval || ch.transient_fraction || ch.check_convergence || ch.spectrum) {
    out << "\n[chaos]\n";
    if (ch.step) out << "step = " << dbl(*ch.step) << '\n';
    if (ch.t_end) out << "t_end = " << dbl(*ch.t_end) << '\n';
    if (ch.renorm_interval) out << "renorm_interval = " << dbl(*ch.renorm_interval) << '\n';
    if (ch.transient_fraction) out << "transient_fraction = " << dbl(*ch.transient_fraction) << '\n';
    if (ch.check_convergence) out << "check_convergence = " << (*ch.check_convergence ? "true" : "false") << '\n';
    if (ch.spectrum) out << "spectrum = " << (*ch.spectrum ? "true" : "false") << '\n';
  }
  const auto& sw = cfg.sweep;
  if (sw.kind || sw.a || sw.b || sw.seeds || sw.t_end || sw.threads) {
    out << "\n[sweep]\n";
    if (sw.kind) out << "kind = " << *sw.kind << '\n';
    if (sw.a) out << "a = " << join_list(*sw.a, dbl) << '\n';
    if (sw.b) out << "b = " << join_list(*sw.b, dbl) << '\n';
    if (sw.seeds) out << "seeds = " << join_list(*sw.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n';
    if (sw.t_end) out << "t_end = " << dbl(*sw.t_end) << '\n';
    if (sw.threads) out << "threads = " << *sw.threads << '\n';
  }
  if (cfg.sft.matrix || cfg.sft.max_period) {
    out << "\n[sft]\n";
    if (cfg.sft.matrix) out << "matrix = " << *cfg.sft.matrix << '\n';
    if (cfg.sft.max_period) out << "max_period = " << *cfg.sft.max_period << '\n';
  }
  return out.str();
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string text = serialize(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCategory::validation, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

MagneticSystem build_system(const ScenarioConfig& cfg) {
  const std::size_t n = cfg.labels.size();
  LieAlgebra::StructureMap structure;
  for (const auto& b : cfg.brackets) {
    auto [it, inserted] = structure.try_emplace(LieAlgebra::Key{b.i, b.j}, zero_vector(n));
    it->second[b.k] += b.coef;
  }
  LieAlgebra algebra(cfg.labels, std::move(structure));

  const ValidationReport report = validate(algebra);
  if (!report.pass) {
    const auto& t = *report.worst;
    fail(ErrorCategory::validation, "Jacobi identity fails at (" + cfg.labels[t[0]] + "," + cfg.labels[t[1]] + "," +
                                        cfg.labels[t[2]] + "): residual " + to_string(report.max_residual));
  }
  if (!lower_central_series(algebra).step) fail(ErrorCategory::validation, "algebra is not nilpotent");

  InnerProduct metric = cfg.metric ? InnerProduct(RMatrix::from_rows(*cfg.metric)) : InnerProduct::identity(n);

  std::vector<std::tuple<std::size_t, std::size_t, Rational>> entries;
  for (const auto& s : cfg.sigma) entries.emplace_back(s.i, s.j, s.value);
  TwoForm sigma = TwoForm::from_entries(n, entries);

  std::optional<LatticeBasis> lattice;
  if (cfg.lattice) {
    for (const auto& row : *cfg.lattice) {
      if (row.size() != n) fail(ErrorCategory::validation, "lattice row length does not match dim");
    }
    if (cfg.lattice->size() != n) fail(ErrorCategory::validation, "lattice needs exactly dim rows");
    lattice.emplace(*cfg.lattice);
  }

  return MagneticSystem(std::move(algebra), std::move(metric), std::move(sigma), std::move(lattice),
                        cfg.field_strength.value_or(defaults::kFieldStrength));
}

std::optional<ExtendedSystem> build_extension(const ScenarioConfig& cfg) {
  if (!cfg.w_label) return std::nullopt;
  const MagneticSystem whole = build_system(cfg);
  if (!whole.sigma().is_zero()) fail(ErrorCategory::validation, "an extension document cannot carry its own sigma");
  const std::size_t n = whole.dim() - 1;
  if (n == 0) fail(ErrorCategory::validation, "extension needs a base of dimension >= 1");

  std::vector<std::string> base_labels(cfg.labels.begin(), cfg.labels.end() - 1);
  LieAlgebra::StructureMap structure;
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> sigma_entries;
  for (const auto& b : cfg.brackets) {
    if (b.j == n) fail(ErrorCategory::validation, "W must be central: found a bracket with " + *cfg.w_label);
    if (b.k == n) {
      sigma_entries.emplace_back(b.i, b.j, b.coef);
    } else {
      auto [it, inserted] = structure.try_emplace(LieAlgebra::Key{b.i, b.j}, zero_vector(n));
      it->second[b.k] += b.coef;
    }
  }

  const RMatrix& gram = whole.metric().gram();
  RMatrix base_gram(n, n);
  for (std::size_t i = 0; i <= n; ++i) {
    const Rational expected = i == n ? 1 : 0;
    if (gram(i, n) != expected) fail(ErrorCategory::validation, "W must be a unit vector orthogonal to the base");
    for (std::size_t j = 0; j < n && i < n; ++j) base_gram(i, j) = gram(i, j);
  }

  std::optional<LatticeBasis> base_lattice;
  if (whole.lattice()) {
    std::vector<RVec> base_rows;
    std::size_t w_rows = 0;
    for (const auto& v : whole.lattice()->vectors()) {
      RVec head(v.begin(), v.end() - 1);
      if (sgn(v.back()) == 0) {
        base_rows.push_back(std::move(head));
      } else if (is_zero(head)) {
        ++w_rows;
      } else {
        fail(ErrorCategory::validation, "extended lattice rows must be base vectors or multiples of W");
      }
    }
    if (w_rows != 1 || base_rows.size() != n) {
      fail(ErrorCategory::validation, "extended lattice needs dim - 1 base rows and one W row");
    }
    base_lattice.emplace(std::move(base_rows));
  }

  MagneticSystem base(LieAlgebra(std::move(base_labels), std::move(structure)), InnerProduct(std::move(base_gram)),
                      TwoForm::from_entries(n, sigma_entries), std::move(base_lattice), whole.field_strength());
  return ExtendedSystem(whole.algebra(), whole.metric(), std::move(base));
}

ScenarioConfig extension_config(const MagneticSystem& m, const std::string& name) {
  const ExtendedSystem ext = extend(m);
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.field_strength = m.field_strength();
  cfg.labels = ext.algebra().labels();
  for (const auto& [key, vec] : ext.algebra().structure()) {
    for (std::size_t k = 0; k < vec.size(); ++k) {
      if (sgn(vec[k]) != 0) cfg.brackets.push_back(BracketTerm{key.first, key.second, k, vec[k]});
    }
  }
  if (!is_identity(ext.metric().gram())) {
    cfg.metric.emplace();
    for (std::size_t i = 0; i < ext.dim(); ++i) cfg.metric->push_back(ext.metric().gram().row(i));
  }
  if (m.lattice()) cfg.lattice = extended_lattice(m, rationality_k(m)).vectors();
  cfg.w_label = cfg.labels.back();
  return cfg;
}

std::uint64_t resolve_seed(const ScenarioConfig& cfg, std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) return *cli_seed;
  if (const char* env = std::getenv("NILMAG_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(ErrorCategory::parse, "NILMAG_SEED must be a non-negative integer");
    }
    return value;
  }
  return cfg.seed.value_or(defaults::kSeed);
}

}  // namespace nilmag
