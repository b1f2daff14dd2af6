#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ngon/degeneracy.hpp"
#include "ngon/geometry.hpp"
#include "ngon/hessian.hpp"
#include "ngon/representation.hpp"
#include "ngon/spectral.hpp"

namespace ngon::cli {

using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <class Range>
std::string join_numbers(const Range& xs, const char* sep = ", ") {
  std::string out;
  bool first = true;
  for (double x : xs) {
    if (!first) out += sep;
    out += format_number(x);
    first = false;
  }
  return out;
}

void write_matrix_text(std::ostream& out, const std::string& name,
                       const Eigen::MatrixXd& M) {
  out << name << " =\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    std::vector<double> row(M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j) row[j] = M(i, j);
    out << "  [" << join_numbers(row) << "]\n";
  }
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// Evaluates fn(i) for i in [0, count) on worker threads; results are stored
// by index so output order does not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::max(
      1, std::min(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_n(int n) {
  if (n < 3) throw UsageError("--n must be at least 3, got " + std::to_string(n));
}

void require_mass(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw UsageError("--m must be a finite value >= 0");
  }
}

// ---------------------------------------------------------------------------
// report

struct BlockRow {
  std::string name;
  Eigen::MatrixXd entries;
  double det = 0.0;
  std::vector<double> eigenvalues;
};

int cmd_report(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_n(spec.n);
  require_mass(spec.m);
  const auto cfg = build_config(spec.n, spec.m);
  const auto geo = geometry_cache(cfg);
  const auto set = assemble_blocks(geo, spec.m);
  const auto c1 = mode_coefficients(geo, 1);

  std::vector<BlockRow> blocks;
  for (const auto& [l, A] : set.A) {
    const auto e = eigenvalues_2x2(A);
    blocks.push_back({"A" + std::to_string(l), A, A.determinant(), {e.begin(), e.end()}});
  }
  const auto e1 = eigenvalues_3x3(set.A1);
  const BlockRow mode1{"A1", set.A1, set.A1.determinant(), {e1.begin(), e1.end()}};
  const double p = mode1_reduced_determinant(geo, c1, spec.m);

  std::vector<std::string> singular;
  auto min_abs = [](const std::vector<double>& xs) {
    double best = std::numeric_limits<double>::infinity();
    for (double x : xs) best = std::min(best, std::abs(x));
    return best;
  };
  if (min_abs(mode1.eigenvalues) < spec.tol_kernel) singular.push_back(mode1.name);
  for (const auto& b : blocks) {
    if (min_abs(b.eigenvalues) < spec.tol_kernel) singular.push_back(b.name);
  }

  // Oracle: the block multiset must reproduce the full spectrum.
  const auto H = assemble_terms(cfg, geo).H;
  const auto full = symmetric_eigenvalues(H);
  const auto predicted = block_spectrum(set, spec.n);
  double spectrum_error = std::numeric_limits<double>::infinity();
  if (full.size() == predicted.size()) {
    spectrum_error = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
      spectrum_error = std::max(spectrum_error, std::abs(full[i] - predicted[i]));
    }
  }
  const double spectrum_tol = spec.tol_analytic * std::max(1.0, H.norm());
  const bool consistent = spectrum_error <= spectrum_tol;

  if (spec.format == "json") {
    json j;
    j["geometry"] = {{"n", spec.n}, {"m", spec.m},     {"theta", geo.theta},
                     {"I0", geo.I0}, {"d0", geo.d0},   {"Ue0", geo.Ue0},
                     {"U0", geo.U0}};
    json scalars = json::array();
    for (const auto& s : set.scalar_eigs) {
      scalars.push_back({{"label", s.label}, {"value", s.value}});
    }
    j["scalar_blocks"] = scalars;
    json arr = json::array();
    for (const auto& b : blocks) {
      arr.push_back({{"name", b.name},
                     {"l", std::stoi(b.name.substr(1))},
                     {"entries", matrix_json(b.entries)},
                     {"det", b.det},
                     {"eigenvalues", b.eigenvalues}});
    }
    j["blocks"] = arr;
    j["mode1_block"] = {{"name", mode1.name},
                        {"entries", matrix_json(mode1.entries)},
                        {"det", mode1.det},
                        {"reduced_det", p},
                        {"eigenvalues", mode1.eigenvalues}};
    j["degenerate"] = {{"verdict", !singular.empty()},
                       {"singular_blocks", singular},
                       {"kernel_tolerance", spec.tol_kernel}};
    j["oracle"] = {{"spectrum_max_error", spectrum_error},
                   {"tolerance", spectrum_tol},
                   {"passed", consistent}};
    emit_json(out, j);
  } else if (spec.format == "csv") {
    write_csv_row(out, {"section", "name", "value"});
    auto row = [&](const std::string& section, const std::string& name, double v) {
      write_csv_row(out, {section, name, format_number(v)});
    };
    row("geometry", "n", spec.n);
    row("geometry", "m", spec.m);
    row("geometry", "theta", geo.theta);
    row("geometry", "I0", geo.I0);
    row("geometry", "d0", geo.d0);
    row("geometry", "Ue0", geo.Ue0);
    row("geometry", "U0", geo.U0);
    for (const auto& s : set.scalar_eigs) row("scalar_blocks", s.label, s.value);
    auto block_rows = [&](const BlockRow& b) {
      for (Eigen::Index i = 0; i < b.entries.rows(); ++i) {
        for (Eigen::Index k = 0; k < b.entries.cols(); ++k) {
          row(b.name, "entry_" + std::to_string(i + 1) + "_" + std::to_string(k + 1),
              b.entries(i, k));
        }
      }
      row(b.name, "det", b.det);
      for (std::size_t i = 0; i < b.eigenvalues.size(); ++i) {
        row(b.name, "eigenvalue_" + std::to_string(i + 1), b.eigenvalues[i]);
      }
    };
    block_rows(mode1);
    row("A1", "reduced_det", p);
    for (const auto& b : blocks) block_rows(b);
    row("degenerate", "verdict", singular.empty() ? 0.0 : 1.0);
    row("oracle", "spectrum_max_error", spectrum_error);
  } else {
    out << "n = " << spec.n << ", m = " << format_number(spec.m) << '\n';
    out << "theta = " << format_number(geo.theta) << ", I0 = " << format_number(geo.I0)
        << ", d0 = " << format_number(geo.d0) << ", Ue0 = " << format_number(geo.Ue0)
        << ", U0 = " << format_number(geo.U0) << '\n';
    out << "scalar blocks:";
    for (const auto& s : set.scalar_eigs) {
      out << ' ' << s.label << '=' << format_number(s.value);
    }
    out << '\n';
    auto block_text = [&](const BlockRow& b) {
      write_matrix_text(out, b.name, b.entries);
      out << "det " << b.name << " = " << format_number(b.det) << '\n';
      out << "eigenvalues " << b.name << ": " << join_numbers(b.eigenvalues) << '\n';
    };
    block_text(mode1);
    out << "reduced det A1 (p(m)) = " << format_number(p) << '\n';
    for (const auto& b : blocks) block_text(b);
    out << "degenerate: " << (singular.empty() ? "no" : "yes");
    for (const auto& s : singular) out << ' ' << s;
    out << '\n';
    out << "spectrum check: max error " << format_number(spectrum_error)
        << " (tolerance " << format_number(spectrum_tol) << ")\n";
  }
  if (!consistent) {
    err << "error: block spectrum disagrees with the full Hessian spectrum\n";
    return kFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// critical

int cmd_critical(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_n(spec.n);
  const auto report = degeneracy_report(spec.n);
  const int predicted = table_prediction(spec.n);
  const bool match = report.count == predicted;

  if (spec.format == "json") {
    json modes = json::array();
    for (const auto& md : report.modes) {
      json entry = {{"l", md.l},
                    {"a_l", md.a_l},
                    {"slope", md.slope},
                    {"beta_l", md.beta_l},
                    {"condition_met", md.condition_met}};
      entry["m_star"] = md.m_star ? json(*md.m_star) : json(nullptr);
      modes.push_back(entry);
    }
    const auto& q = report.mode1;
    json j;
    j["n"] = spec.n;
    j["modes"] = modes;
    j["mode1"] = {{"b", q.closed.b},
                  {"c", q.closed.c},
                  {"d", q.closed.d},
                  {"interpolated",
                   {{"b", q.interpolated.b}, {"c", q.interpolated.c}, {"d", q.interpolated.d}}},
                  {"max_relative_mismatch", q.max_relative_mismatch},
                  {"roots", q.roots},
                  {"positive_roots", q.positive_roots}};
    json values = json::array();
    for (const auto& cv : report.critical) values.push_back({{"mode", cv.mode}, {"m", cv.m}});
    j["critical_values"] = values;
    j["count"] = report.count;
    j["predicted"] = predicted;
    j["match"] = match;
    j["collisions"] = report.collisions;
    emit_json(out, j);
  } else if (spec.format == "csv") {
    write_csv_row(out, {"mode", "m"});
    for (const auto& cv : report.critical) {
      write_csv_row(out, {std::to_string(cv.mode), format_number(cv.m)});
    }
  } else {
    out << "n = " << spec.n << '\n';
    const auto& q = report.mode1;
    out << "mode 1: p(m) = " << format_number(q.closed.b) << " m^2 + "
        << format_number(q.closed.c) << " m + " << format_number(q.closed.d) << '\n';
    out << "mode 1 roots: " << (q.roots.empty() ? "none" : join_numbers(q.roots)) << '\n';
    for (const auto& md : report.modes) {
      out << "mode " << md.l << ": a_l = " << format_number(md.a_l)
          << ", beta_l = " << format_number(md.beta_l) << ", m* = "
          << (md.m_star ? format_number(*md.m_star) : std::string("none")) << '\n';
    }
    out << "critical values:\n";
    for (const auto& cv : report.critical) {
      out << "  l=" << cv.mode << "  m*=" << format_number(cv.m) << '\n';
    }
    out << "count = " << report.count << ", predicted = " << predicted << ", "
        << (match ? "match" : "MISMATCH") << '\n';
  }
  if (!match && !spec.no_assert) {
    err << "error: " << report.count << " distinct values, table predicts "
        << predicted << '\n';
    return kFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// scan

int cmd_scan(const RunSpec& spec, std::ostream& out, std::ostream&) {
  require_n(spec.n);
  if (!(spec.m_min > 0.0) || !(spec.m_max > spec.m_min) || !std::isfinite(spec.m_max)) {
    throw UsageError("scan needs 0 < --m-min < --m-max");
  }
  if (spec.steps < 2) throw UsageError("--steps must be at least 2");

  const auto geo = geometry_cache(build_config(spec.n, 0.0));
  const auto c1 = mode_coefficients(geo, 1);
  std::vector<ModeCoefficients> coeffs;
  for (int l = 2; l <= spec.n / 2; ++l) coeffs.push_back(mode_coefficients(geo, l));

  std::vector<std::string> header{"m", "det_A1"};
  for (const auto& c : coeffs) header.push_back("det_A" + std::to_string(c.l));
  header.push_back("min_abs_eig_full");

  const int count = spec.steps + 1;
  std::vector<std::vector<double>> rows(count);
  parallel_for(count, [&](int i) {
    const double m = i == spec.steps
                         ? spec.m_max
                         : spec.m_min + (spec.m_max - spec.m_min) * i / spec.steps;
    std::vector<double> row{m, block_3x3(geo, c1, m).determinant()};
    for (const auto& c : coeffs) row.push_back(block_2x2(geo, c, m).determinant());
    const auto cfg = build_config(spec.n, m);
    auto eig = symmetric_eigenvalues(assemble_terms(cfg, geometry_cache(cfg)).H);
    for (auto& x : eig) x = std::abs(x);
    std::sort(eig.begin(), eig.end());
    row.push_back(eig[2]);  // first two are the dilation and rotation modes
    rows[i] = std::move(row);
  });

  if (spec.format == "json") {
    json j;
    j["n"] = spec.n;
    j["columns"] = header;
    j["rows"] = rows;
    emit_json(out, j);
  } else {
    const char* sep = spec.format == "csv" ? "," : "  ";
    if (spec.format == "csv") {
      write_csv_row(out, header);
    } else {
      for (std::size_t i = 0; i < header.size(); ++i) out << (i ? sep : "") << header[i];
      out << '\n';
    }
    for (const auto& row : rows) {
      if (spec.format == "csv") {
        std::vector<std::string> fields;
        for (double x : row) fields.push_back(format_number(x));
        write_csv_row(out, fields);
      } else {
        out << join_numbers(row, sep) << '\n';
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_n(spec.n);
  require_mass(spec.m);
  const auto cfg = build_config(spec.n, spec.m);
  const auto geo = geometry_cache(cfg);
  const double tau = spec.tol_analytic;
  std::vector<Check> checks;

  const Eigen::MatrixXd fd = fd_hessian(cfg);
  auto terms = assemble_terms(cfg, geo,
                              spec.flip_sep_sign ? SeparationConvention::backward
                                                 : SeparationConvention::forward);
  double fd_error = relative_error(terms.H, fd);
  if (!spec.flip_sep_sign && fd_error > spec.tol_fd) {
    auto other = assemble_terms(cfg, geo, SeparationConvention::backward);
    const double other_error = relative_error(other.H, fd);
    if (other_error < fd_error) {
      terms = std::move(other);
      fd_error = other_error;
    }
  }
  const Eigen::MatrixXd& H = terms.H;
  checks.push_back({"fd_vs_analytic", fd_error, spec.tol_fd});

  const double f0 = objective(cfg, cfg.positions);
  checks.push_back({"critical_point",
                    objective_gradient(cfg, cfg.positions).norm() / std::abs(f0), tau});

  const Eigen::MatrixXd direct = coupling_direct(cfg);
  checks.push_back({"coupling_term", (terms.C - direct).norm() / direct.norm(), tau});

  checks.push_back({"equivariance", equivariance_check(H, cfg), 0.1 * tau});

  const auto basis = real_basis(cfg);
  const auto blocks = conjugate_blocks(H, basis, std::numeric_limits<double>::infinity());
  checks.push_back({"block_diagonal", blocks.max_off_block / blocks.h_norm, tau});

  // Closed-form blocks against H compressed onto each parity sector.
  double block_error = 0.0;
  for (const auto& g : basis.groups) {
    if (g.mode == 0) continue;
    const Eigen::MatrixXd compressed = compress(H, basis.raw_columns(g));
    Eigen::MatrixXd expected;
    if (g.mode == 1) {
      expected = block_3x3(geo, mode_coefficients(geo, 1), spec.m);
    } else if (2 * g.mode == spec.n) {
      const auto A = block_2x2(geo, mode_coefficients(geo, g.mode), spec.m);
      expected = Eigen::MatrixXd::Constant(1, 1, g.parity > 0 ? A(0, 0) : A(1, 1));
    } else {
      expected = block_2x2(geo, mode_coefficients(geo, g.mode), spec.m);
    }
    block_error = std::max(block_error, (compressed - expected).norm() /
                                            std::max(1.0, expected.norm()));
  }
  checks.push_back({"closed_form_blocks", block_error, tau});

  const auto full = symmetric_eigenvalues(H);
  const auto predicted = block_spectrum(assemble_blocks(geo, spec.m), spec.n);
  double spectrum_error = std::numeric_limits<double>::infinity();
  if (full.size() == predicted.size()) {
    spectrum_error = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
      spectrum_error = std::max(spectrum_error, std::abs(full[i] - predicted[i]));
    }
  }
  checks.push_back({"spectrum_multiset", spectrum_error, 10.0 * tau});

  double sums_error = 0.0;
  const double I0 = geo.I0;
  using cd = std::complex<double>;
  for (int l = 1; l <= spec.n / 2; ++l) {
    const auto s = term_mode_sums(terms, cfg, l);
    const auto c = mode_coefficients(geo, l);
    const Eigen::Vector2cd I_expected(1.0 / I0, 0.0);
    const Eigen::Vector2cd Ip_expected(0.0, 1.0 / I0);
    const Eigen::Vector2cd U_expected(c.u_l1 + 2.0 * spec.m, cd(0.0, c.u_l2_im));
    const Eigen::Vector2cd Up_expected(cd(0.0, c.up_l1_im), c.up_l2 - spec.m);
    sums_error = std::max({sums_error, s.C.norm(), s.Cp.norm(),
                           (s.I - I_expected).norm(), (s.Ip - Ip_expected).norm(),
                           (s.U - U_expected).norm() / std::max(1.0, spec.m),
                           (s.Up - Up_expected).norm() / std::max(1.0, spec.m)});
  }
  checks.push_back({"mode_sums", sums_error, 0.1 * tau});

  checks.push_back({"center_coupling",
                    center_coupling_residuals(terms, cfg).max() / std::max(1.0, spec.m),
                    0.1 * tau});

  const auto f_zero = fourier_vectors(cfg, 0);
  const Eigen::VectorXd v0 = f_zero.v1.real();
  const Eigen::VectorXd w0 = f_zero.v2.real();
  checks.push_back({"trivial_modes",
                    std::max((H * v0).norm(), (H * w0).norm()) / (H.norm() * v0.norm()),
                    tau});

  const Check* first_failure = nullptr;
  for (const auto& c : checks) {
    if (!c.passed()) {
      first_failure = &c;
      break;
    }
  }

  if (spec.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"residual", c.residual},
                     {"tolerance", c.tolerance},
                     {"passed", c.passed()}});
    }
    json j;
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["convention"] = to_string(terms.convention);
    j["checks"] = arr;
    j["passed"] = first_failure == nullptr;
    j["first_failure"] = first_failure ? json(first_failure->name) : json(nullptr);
    emit_json(out, j);
  } else if (spec.format == "csv") {
    write_csv_row(out, {"check", "residual", "tolerance", "passed"});
    for (const auto& c : checks) {
      write_csv_row(out, {c.name, format_number(c.residual), format_number(c.tolerance),
                          c.passed() ? "true" : "false"});
    }
  } else {
    out << "n = " << spec.n << ", m = " << format_number(spec.m)
        << ", separation convention: " << to_string(terms.convention) << '\n';
    for (const auto& c : checks) {
      out << (c.passed() ? "PASS  " : "FAIL  ") << c.name << "  residual "
          << format_number(c.residual) << "  tolerance " << format_number(c.tolerance)
          << '\n';
    }
  }
  if (first_failure) {
    err << "verification failed: " << first_failure->name << '\n';
    return kFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// table

int cmd_table(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  if (spec.n_max < 3) {
    throw UsageError("--n-max must be at least 3, got " + std::to_string(spec.n_max));
  }
  const int count = spec.n_max - 2;
  std::vector<TableRow> rows(count);
  parallel_for(count, [&](int i) { rows[i] = count_table(i + 3, i + 3).front(); });
  const bool all_match =
      std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.match; });

  if (spec.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"count", r.count},
                     {"predicted", r.predicted},
                     {"match", r.match}});
    }
    json j;
    j["rows"] = arr;
    j["all_match"] = all_match;
    emit_json(out, j);
  } else if (spec.format == "csv") {
    write_csv_row(out, {"n", "count", "predicted", "match"});
    for (const auto& r : rows) {
      write_csv_row(out, {std::to_string(r.n), std::to_string(r.count),
                          std::to_string(r.predicted), r.match ? "true" : "false"});
    }
  } else {
    out << "n  count  predicted  match\n";
    for (const auto& r : rows) {
      out << r.n << "  " << r.count << "  " << r.predicted << "  "
          << (r.match ? "yes" : "NO") << '\n';
    }
  }
  if (!all_match && !spec.no_assert) {
    err << "error: computed counts disagree with the table\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.format != "text" && spec.format != "json" && spec.format != "csv") {
      throw UsageError("unknown format " + spec.format);
    }
    if (spec.command == "report") return cmd_report(spec, out, err);
    if (spec.command == "critical") return cmd_critical(spec, out, err);
    if (spec.command == "scan") return cmd_scan(spec, out, err);
    if (spec.command == "verify") return cmd_verify(spec, out, err);
    if (spec.command == "table") return cmd_table(spec, out, err);
    throw UsageError("unknown command " + spec.command);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  CLI::App app{"Hessian blocks and central-mass degeneracy values of the "
               "central + regular n-gon"};
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", spec.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--tol-analytic", spec.tol_analytic, "Analytic tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-fd", spec.tol_fd, "Finite-difference tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-kernel", spec.tol_kernel, "Kernel threshold")
        ->check(CLI::PositiveNumber);
  };

  auto* report = app.add_subcommand("report", "Blocks, eigenvalues and verdict at one m");
  report->add_option("--n", spec.n, "Number of vertices")->required();
  report->add_option("--m", spec.m, "Central mass")->required();
  common(report);

  auto* critical = app.add_subcommand("critical", "Degeneracy values of m for one n");
  critical->add_option("--n", spec.n, "Number of vertices")->required();
  critical->add_flag("--no-assert", spec.no_assert, "Do not fail on table mismatch");
  common(critical);

  auto* scan = app.add_subcommand("scan", "Block determinants over an m-grid");
  scan->add_option("--n", spec.n, "Number of vertices")->required();
  scan->add_option("--m-min", spec.m_min, "Smallest m")->required();
  scan->add_option("--m-max", spec.m_max, "Largest m")->required();
  scan->add_option("--steps", spec.steps, "Number of intervals");
  common(scan);

  auto* verify = app.add_subcommand("verify", "Run every oracle check at one (n, m)");
  verify->add_option("--n", spec.n, "Number of vertices")->required();
  verify->add_option("--m", spec.m, "Central mass")->required();
  verify->add_flag("--flip-sep-sign", spec.flip_sep_sign,
                   "Use the reversed separation sign (negative control)");
  common(verify);

  auto* table = app.add_subcommand("table", "Distinct-value counts for n = 3..n-max");
  table->add_option("--n-max", spec.n_max, "Largest n")->required();
  table->add_flag("--no-assert", spec.no_assert, "Do not fail on mismatch");
  common(table);

  std::vector<const char*> argv{"ngon"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  spec.command = app.get_subcommands().front()->get_name();
  return execute(spec, out, err);
}

}  // namespace ngon::cli
