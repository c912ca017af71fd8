#pragma once

// JSON state files and tangle reports.
//
// State file:
//   {"schema_version": 1, "kind": "pure" | "density", "dims": [d0, d1, ...],
//    "data": [[re, im], ...], "metadata": {"label": "...", "seed": 7}}
// Pure data lists the amplitudes in basis order; density data lists the
// matrix entries row-major. Numbers are written with 17 significant digits.

#include <resent/tangle.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace resent {

inline constexpr const char* kToolName = "resent";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kStateSchemaVersion = 1;

/// Malformed or inconsistent file content. `where()` names the line or field.
class FormatError : public InvalidArgument {
 public:
  FormatError(const std::string& where, const std::string& what)
      : InvalidArgument(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct StateFile {
  int schema_version = kStateSchemaVersion;
  std::string kind = "pure";
  Dims dims;
  std::vector<Complex> data;
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;

  State to_state() const {
    if (kind == "pure") {
      CVector v(static_cast<Eigen::Index>(data.size()));
      for (std::size_t i = 0; i < data.size(); ++i) v(i) = data[i];
      return PureState(dims, std::move(v));
    }
    const auto side = static_cast<Eigen::Index>(dims_product(dims));
    CMatrix m(side, side);
    for (Eigen::Index r = 0; r < side; ++r)
      for (Eigen::Index c = 0; c < side; ++c) m(r, c) = data[r * side + c];
    return DensityMatrix(dims, std::move(m));
  }

  static StateFile from_state(const State& state) {
    StateFile f;
    f.dims = state_dims(state);
    if (const auto* psi = std::get_if<PureState>(&state)) {
      f.kind = "pure";
      f.data.assign(psi->amplitudes().data(), psi->amplitudes().data() + psi->size());
    } else {
      const CMatrix& m = std::get<DensityMatrix>(state).matrix();
      f.kind = "density";
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) f.data.push_back(m(r, c));
    }
    return f;
  }

  friend bool operator==(const StateFile&, const StateFile&) = default;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

template <class Range>
std::string fmt_int_list(const Range& values) {
  std::string out = "[";
  bool first = true;
  for (auto v : values) {
    if (!first) out += ", ";
    out += std::to_string(v);
    first = false;
  }
  return out + "]";
}

inline int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("line " + std::to_string(line_of(text, e.byte)), e.what());
  }
}

inline const nlohmann::json& field(const nlohmann::json& obj, const std::string& name,
                                   const std::string& path = "") {
  const std::string where = "field '" + path + name + "'";
  if (!obj.is_object()) throw FormatError(path.empty() ? "document" : path, "expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw FormatError(where, "missing");
  return *it;
}

template <class T>
T typed(const nlohmann::json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where, e.what());
  }
}

inline double number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where, "expected a number");
  return j.get<double>();
}

inline Dims parse_dims(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where, "expected a nonempty integer list");
  Dims dims;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long long>() < 1) {
      throw FormatError(where, "entry " + std::to_string(k) + " is not a positive integer");
    }
    dims.push_back(j[k].get<int>());
  }
  return dims;
}

}  // namespace detail

inline std::string write_state_file(const StateFile& f) {
  std::ostringstream os;
  os << "{\n  \"schema_version\": " << f.schema_version << ",\n  \"kind\": \"" << f.kind
     << "\",\n  \"dims\": " << detail::fmt_int_list(f.dims) << ",\n  \"data\": [";
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << "[" << detail::fmt_double(f.data[i].real()) << ", "
       << detail::fmt_double(f.data[i].imag()) << "]";
  }
  os << (f.data.empty() ? "]" : "\n  ]");
  if (f.label || f.seed) {
    os << ",\n  \"metadata\": {";
    bool first = true;
    if (f.label) {
      os << "\"label\": " << nlohmann::json(*f.label).dump();
      first = false;
    }
    if (f.seed) os << (first ? "" : ", ") << "\"seed\": " << *f.seed;
    os << "}";
  }
  os << "\n}\n";
  return os.str();
}

/// Parses and validates a state file; the returned record converts to a
/// valid State via to_state().
inline StateFile parse_state_file(const std::string& text) {
  const nlohmann::json doc = detail::parse_json(text);
  if (!doc.is_object()) throw FormatError("document", "expected a JSON object");
  StateFile f;
  f.schema_version =
      detail::typed<int>(detail::field(doc, "schema_version"), "field 'schema_version'");
  if (f.schema_version != kStateSchemaVersion) {
    throw FormatError("field 'schema_version'",
                      "unsupported version " + std::to_string(f.schema_version));
  }
  f.kind = detail::typed<std::string>(detail::field(doc, "kind"), "field 'kind'");
  if (f.kind != "pure" && f.kind != "density") {
    throw FormatError("field 'kind'", "expected \"pure\" or \"density\", got \"" + f.kind + "\"");
  }
  f.dims = detail::parse_dims(detail::field(doc, "dims"), "field 'dims'");

  const nlohmann::json& data = detail::field(doc, "data");
  if (!data.is_array()) throw FormatError("field 'data'", "expected a list of [re, im] pairs");
  const std::size_t side = dims_product(f.dims);
  const std::size_t expected = f.kind == "pure" ? side : side * side;
  if (data.size() != expected) {
    throw FormatError("field 'data'", "has " + std::to_string(data.size()) +
                                          " entries, dims " + dims_to_string(f.dims) + " need " +
                                          std::to_string(expected));
  }
  f.data.reserve(expected);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string where = "field 'data[" + std::to_string(i) + "]'";
    if (!data[i].is_array() || data[i].size() != 2) {
      throw FormatError(where, "expected a [re, im] pair");
    }
    f.data.emplace_back(detail::number(data[i][0], where), detail::number(data[i][1], where));
  }

  if (const auto meta = doc.find("metadata"); meta != doc.end()) {
    if (!meta->is_object()) throw FormatError("field 'metadata'", "expected an object");
    if (const auto it = meta->find("label"); it != meta->end()) {
      f.label = detail::typed<std::string>(*it, "field 'metadata.label'");
    }
    if (const auto it = meta->find("seed"); it != meta->end()) {
      f.seed = detail::typed<std::uint64_t>(*it, "field 'metadata.seed'");
    }
  }

  try {
    (void)f.to_state();
  } catch (const InvalidArgument& e) {
    throw FormatError("field 'data'", e.what());
  }
  return f;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path, "cannot open for writing");
  out << text;
  if (!out) throw FormatError(path, "write failed");
}

inline StateFile load_state_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_state_file(text);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

// ---------------------------------------------------------------------------
// Reports

inline std::string write_report(const TangleReport& r) {
  std::ostringstream os;
  const OptimizerConfig& c = r.config;
  os << "{\n  \"tool\": \"" << kToolName << "\",\n  \"version\": \"" << kToolVersion
     << "\",\n  \"kind\": \"" << (r.pure ? "pure" : "density")
     << "\",\n  \"dims\": " << detail::fmt_int_list(r.dims)
     << ",\n  \"lower_bound_semantics\": " << detail::fmt_bool(!r.pure)
     << ",\n  \"optimizer\": {\"restarts\": " << c.restarts << ", \"max_iter\": " << c.max_iter
     << ", \"tol\": " << detail::fmt_double(c.tol) << ", \"window\": " << c.window
     << ", \"seed\": " << c.seed << ", \"fd_step\": " << detail::fmt_double(c.fd_step)
     << ", \"smoothing\": [";
  for (std::size_t k = 0; k < c.smoothing.size(); ++k)
    os << (k ? ", " : "") << detail::fmt_double(c.smoothing[k]);
  os << "]},\n  \"foci\": [";
  for (std::size_t k = 0; k < r.foci.size(); ++k) {
    const FocusTangle& f = r.foci[k];
    os << (k ? ",\n    " : "\n    ") << "{\"focus\": " << detail::fmt_int_list(f.focus)
       << ", \"rest\": " << detail::fmt_int_list(f.rest)
       << ", \"total_sq\": " << detail::fmt_double(f.total_sq) << ", \"pair_sq\": [";
    for (std::size_t p = 0; p < f.pair_sq.size(); ++p) {
      os << (p ? ", " : "") << "{\"party\": " << f.pair_sq[p].party
         << ", \"c2\": " << detail::fmt_double(f.pair_sq[p].c2) << "}";
    }
    os << "], \"tau\": " << detail::fmt_double(f.tau)
       << ", \"converged\": " << detail::fmt_bool(f.converged) << "}";
  }
  os << (r.foci.empty() ? "]" : "\n  ]");
  os << ",\n  \"residual_raw\": " << detail::fmt_double(r.residual_raw)
     << ",\n  \"residual\": " << detail::fmt_double(r.residual)
     << ",\n  \"argmin_index\": " << r.argmin << ",\n  \"argmin_focus\": "
     << detail::fmt_int_list(r.foci.empty() ? std::vector<int>{} : r.minimizer().focus)
     << ",\n  \"monogamy_violation\": " << detail::fmt_bool(r.monogamy_violation)
     << ",\n  \"all_converged\": " << detail::fmt_bool(r.all_converged)
     << ",\n  \"runtime_seconds\": " << detail::fmt_double(r.runtime_seconds) << "\n}\n";
  return os.str();
}

inline TangleReport parse_report(const std::string& text) {
  using detail::field;
  using detail::number;
  using detail::typed;
  const nlohmann::json doc = detail::parse_json(text);
  TangleReport r;
  const std::string kind = typed<std::string>(field(doc, "kind"), "field 'kind'");
  if (kind != "pure" && kind != "density") throw FormatError("field 'kind'", "unknown kind");
  r.pure = kind == "pure";
  r.dims = detail::parse_dims(field(doc, "dims"), "field 'dims'");

  const nlohmann::json& opt = field(doc, "optimizer");
  r.config.restarts = typed<int>(field(opt, "restarts", "optimizer."), "field 'optimizer.restarts'");
  r.config.max_iter = typed<int>(field(opt, "max_iter", "optimizer."), "field 'optimizer.max_iter'");
  r.config.tol = number(field(opt, "tol", "optimizer."), "field 'optimizer.tol'");
  r.config.window = typed<int>(field(opt, "window", "optimizer."), "field 'optimizer.window'");
  r.config.seed = typed<std::uint64_t>(field(opt, "seed", "optimizer."), "field 'optimizer.seed'");
  r.config.fd_step = number(field(opt, "fd_step", "optimizer."), "field 'optimizer.fd_step'");
  r.config.smoothing =
      typed<std::vector<double>>(field(opt, "smoothing", "optimizer."), "field 'optimizer.smoothing'");

  const nlohmann::json& foci = field(doc, "foci");
  if (!foci.is_array()) throw FormatError("field 'foci'", "expected a list");
  for (std::size_t k = 0; k < foci.size(); ++k) {
    const std::string path = "foci[" + std::to_string(k) + "].";
    const nlohmann::json& j = foci[k];
    FocusTangle f;
    f.focus = typed<std::vector<int>>(field(j, "focus", path), "field '" + path + "focus'");
    f.rest = typed<std::vector<int>>(field(j, "rest", path), "field '" + path + "rest'");
    f.total_sq = number(field(j, "total_sq", path), "field '" + path + "total_sq'");
    const nlohmann::json& pairs = field(j, "pair_sq", path);
    if (!pairs.is_array()) throw FormatError("field '" + path + "pair_sq'", "expected a list");
    for (const nlohmann::json& p : pairs) {
      f.pair_sq.push_back({typed<int>(field(p, "party", path + "pair_sq."), "party"),
                           number(field(p, "c2", path + "pair_sq."), "c2")});
    }
    f.tau = number(field(j, "tau", path), "field '" + path + "tau'");
    f.converged = typed<bool>(field(j, "converged", path), "field '" + path + "converged'");
    r.foci.push_back(std::move(f));
  }
  r.residual_raw = number(field(doc, "residual_raw"), "field 'residual_raw'");
  r.residual = number(field(doc, "residual"), "field 'residual'");
  r.argmin = typed<std::size_t>(field(doc, "argmin_index"), "field 'argmin_index'");
  if (!r.foci.empty() && r.argmin >= r.foci.size()) {
    throw FormatError("field 'argmin_index'", "out of range");
  }
  r.monogamy_violation =
      typed<bool>(field(doc, "monogamy_violation"), "field 'monogamy_violation'");
  r.all_converged = typed<bool>(field(doc, "all_converged"), "field 'all_converged'");
  r.runtime_seconds = number(field(doc, "runtime_seconds"), "field 'runtime_seconds'");
  return r;
}

}  // namespace resent
