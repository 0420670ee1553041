#include "symctl/lie_engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace symctl::lie {

using spin::SymmetricGenerator;

namespace {

double real_inner(const Matrix& a, const Matrix& b) { return tensor::hs_inner(a, b).real(); }

struct GeneratorTable {
  std::vector<SymmetricGenerator> labels;
  std::vector<Matrix> matrices;
};

const GeneratorTable& generator_table(int n) {
  static std::array<GeneratorTable, spin::kMaxSpins + 1> tables;
  static std::array<std::once_flag, spin::kMaxSpins + 1> flags;
  if (n < 1 || n > spin::kMaxSpins)
    throw PreconditionError("symmetric generators: n = " + std::to_string(n) + " out of range");
  std::call_once(flags[n], [n] {
    auto& t = tables[n];
    t.labels = spin::all_symmetric_generators(n);
    for (const auto& g : t.labels) t.matrices.push_back(spin::symmetric_generator(g));
  });
  return tables[n];
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SymmetricGenerator X(int n, int kx, int ky, int kz) { return {n, kx, ky, kz}; }

}  // namespace

Matrix LieBasis::residual(const Matrix& a) const {
  Matrix v = a;
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto& b : elements_) v -= real_inner(b, v) * b;
  return v;
}

bool LieBasis::try_insert(const Matrix& a, double threshold) {
  if (a.rows() != dim_space_ || a.cols() != dim_space_)
    throw PreconditionError("LieBasis: dimension mismatch");
  Matrix v = residual(a);
  const double norm = tensor::hs_norm(v);
  if (norm <= threshold) return false;
  v /= norm;
  // Project once more after normalizing so orthogonality holds at unit scale.
  v = residual(v);
  v /= tensor::hs_norm(v);
  elements_.push_back(std::move(v));
  return true;
}

LieBasis closure(const std::vector<Matrix>& generators, const ClosureOptions& options,
                 ClosureStats* stats) {
  if (generators.empty()) throw PreconditionError("closure: no generators");
  const Eigen::Index dim = generators.front().rows();
  for (const auto& g : generators) {
    if (!tensor::is_square(g) || g.rows() != dim)
      throw PreconditionError("closure: generators must share one square dimension");
    if (!tensor::is_skew_hermitian(g))
      throw PreconditionError("closure: generator is not skew-Hermitian");
  }

  LieBasis basis(dim);
  for (const auto& g : generators) {
    const double norm = tensor::hs_norm(g);
    if (norm > 0.0) basis.try_insert(g / norm);
  }

  ClosureStats local;
  int done = 0;
  while (done < basis.size()) {
    if (local.passes >= options.max_passes)
      throw std::runtime_error("closure: no fixed point after max_passes");
    const int size = basis.size();
    std::vector<std::pair<int, int>> pairs;
    for (int j = done; j < size; ++j)
      for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
    const auto brackets = kernels::bracket_batch(basis.elements(), pairs, options.execution);
    for (const auto& b : brackets) basis.try_insert(b);
    local.brackets += static_cast<long>(pairs.size());
    ++local.passes;
    done = size;
  }
  if (stats) *stats = local;
  return basis;
}

std::vector<Matrix> model_generators(int n) {
  const auto& m = spin::model(n);
  if (n < 2) throw PreconditionError("model_generators: needs n >= 2");
  return {kI * m.zz, kI * m.x, kI * m.y};
}

long predicted_dimension(int n) {
  if (n < 1) throw PreconditionError("predicted_dimension: needs n >= 1");
  return binomial(n + 3, n) - 1;
}

double membership_residual(const LieBasis& basis, const Matrix& a) {
  if (a.rows() != basis.dim_space() || a.cols() != basis.dim_space())
    throw PreconditionError("contains: dimension mismatch");
  const double norm = tensor::hs_norm(a);
  if (norm == 0.0) return 0.0;
  return tensor::hs_norm(basis.residual(a)) / norm;
}

bool contains(const LieBasis& basis, const Matrix& a) {
  if (!tensor::is_skew_hermitian(a)) throw PreconditionError("contains: input not skew-Hermitian");
  return membership_residual(basis, a) <= tol::kMembership;
}

io::json Theorem1Report::to_json() const {
  return io::json{{"n", n},
                  {"generated_dim", generated_dim},
                  {"predicted_dim", predicted_dim},
                  {"dimension_ok", dimension_ok},
                  {"max_invariance_residual", max_invariance_residual},
                  {"max_trace", max_trace},
                  {"max_skew_residual", max_skew_residual},
                  {"invariance_ok", invariance_ok},
                  {"generators_checked", generators_checked},
                  {"missing", missing},
                  {"membership_ok", membership_ok},
                  {"seconds", seconds},
                  {"passed", passed()}};
}

Theorem1Report verify_theorem1(int n, const ClosureOptions& options, const LieBasis* precomputed) {
  if (n < 2 || n > 5) throw PreconditionError("verify_theorem1: needs 2 <= n <= 5");
  Theorem1Report r;
  r.n = n;
  const auto start = std::chrono::steady_clock::now();
  const LieBasis basis = precomputed ? *precomputed : closure(model_generators(n), options);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  r.generated_dim = basis.size();
  r.predicted_dim = predicted_dimension(n);
  r.dimension_ok = r.generated_dim == r.predicted_dim;

  for (const auto& b : basis.elements()) {
    r.max_invariance_residual = std::max(r.max_invariance_residual, spin::permutation_residual(b));
    r.max_trace = std::max(r.max_trace, std::abs(b.trace()));
    r.max_skew_residual = std::max(r.max_skew_residual, tensor::max_abs(b + b.adjoint()));
  }
  r.invariance_ok = r.max_invariance_residual <= 1e-10 && r.max_trace <= 1e-10 &&
                    r.max_skew_residual <= 1e-10;

  const auto& table = generator_table(n);
  const auto dim = static_cast<double>(basis.dim_space());
  for (std::size_t k = 0; k < table.labels.size(); ++k) {
    if (table.labels[k].weight() == 0) continue;
    Matrix a = table.matrices[k];
    a -= (a.trace() / dim) * Matrix::Identity(a.rows(), a.cols());
    ++r.generators_checked;
    if (!contains(basis, a)) r.missing.push_back(table.labels[k].str());
  }
  r.membership_ok = r.missing.empty();
  return r;
}

// ---- identities ----

bool BracketIdentity::well_formed() const {
  auto ok = [this](const SymmetricGenerator& g) { return g.n == n && g.valid(); };
  if (!ok(lhs_a) || !ok(lhs_b)) return false;
  return std::all_of(rhs.begin(), rhs.end(), [&](const Term& t) { return ok(t.generator); });
}

std::string BracketIdentity::lhs_str() const {
  return "[" + lhs_a.str() + ", " + lhs_b.str() + "]";
}

std::string terms_str(const std::vector<Term>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  char buf[64];
  for (const auto& t : terms) {
    std::snprintf(buf, sizeof buf, "%s%.12g*", out.empty() ? "" : " + ", t.coefficient);
    out += buf + t.generator.str();
  }
  return out;
}

namespace {

io::json terms_json(const std::vector<Term>& terms) {
  io::json out = io::json::array();
  for (const auto& t : terms)
    out.push_back({{"coefficient", t.coefficient}, {"generator", t.generator.str()}});
  return out;
}

}  // namespace

io::json IdentityResult::to_json() const {
  io::json j{{"name", identity.name},
             {"n", identity.n},
             {"lhs", identity.lhs_str()},
             {"stated_rhs", terms_json(identity.rhs)},
             {"measured_rhs", terms_json(measured)},
             {"holds", holds},
             {"coefficient_deviation", coefficient_deviation},
             {"expansion_residual", expansion_residual},
             {"consistency_residual", consistency_residual}};
  if (identity.kbar) j["kbar"] = *identity.kbar;
  return j;
}

std::vector<BracketIdentity> identity_catalog(int n) {
  if (n < 2 || n > spin::kMaxSpins)
    throw PreconditionError("identity_catalog: n = " + std::to_string(n) + " out of range");
  std::vector<BracketIdentity> all;
  auto add = [&](std::string name, std::optional<int> kbar, SymmetricGenerator a,
                 SymmetricGenerator b, std::vector<Term> rhs) {
    all.push_back({std::move(name), n, kbar, a, b, std::move(rhs)});
  };

  add("x-y", {}, X(n, 1, 0, 0), X(n, 0, 1, 0), {{2, X(n, 0, 0, 1)}});
  add("l2.x", {}, X(n, 1, 0, 0), X(n, 0, 0, 2), {{-2, X(n, 0, 1, 1)}});
  add("l2.y", {}, X(n, 0, 1, 0), X(n, 0, 0, 2), {{2, X(n, 1, 0, 1)}});
  add("forApp.1", {}, X(n, 0, 1, 1), X(n, 1, 0, 0), {{4, X(n, 0, 2, 0)}, {-4, X(n, 0, 0, 2)}});
  add("forApp.2", {}, X(n, 1, 0, 1), X(n, 0, 1, 0), {{-4, X(n, 2, 0, 0)}, {4, X(n, 0, 0, 2)}});
  add("l3-bis", {}, X(n, 0, 0, 1), X(n, 2, 0, 0), {{2, X(n, 1, 1, 0)}});
  add("appendixA", {}, X(n, 0, 1, 1), X(n, 1, 0, 0), {{-4, X(n, 0, 0, 2)}, {4, X(n, 0, 2, 0)}});
  add("identity-commutes", {}, X(n, 1, 1, 0), X(n, 0, 0, 0), {});

  for (int k = 3; k <= n; ++k) {
    add("e0", k, X(n, k - 1, 0, 0), X(n, 1, 1, 0), {{2, X(n, k - 1, 0, 1)}, {2, X(n, k - 2, 0, 1)}});
    add("e1", k, X(n, k - 1, 1, 0), X(n, 0, 0, 1), {{-2, X(n, k - 2, 2, 0)}, {2, X(n, k, 0, 0)}});
    add("e2", k, X(n, k - 1, 0, 1), X(n, 0, 1, 0), {{2, X(n, k - 2, 0, 2)}, {-2, X(n, k, 0, 0)}});
    add("e3", k, X(n, k - 2, 1, 0), X(n, 1, 0, 1),
        {{-2, X(n, k - 3, 2, 0)},
         {2, X(n, k - 2, 0, 0)},
         {-2, X(n, k - 2, 2, 0)},
         {-2, X(n, k - 2, 0, 2)},
         {2, X(n, k, 0, 0)}});
  }

  std::vector<BracketIdentity> out;
  for (auto& id : all)
    if (id.well_formed()) out.push_back(std::move(id));
  return out;
}

std::vector<Term> expand_symmetric(int n, const Matrix& a, double* residual) {
  const auto& table = generator_table(n);
  if (a.rows() != table.matrices.front().rows() || !tensor::is_square(a))
    throw PreconditionError("expand_symmetric: dimension mismatch");
  std::vector<Term> out;
  Matrix rest = a;
  for (std::size_t k = 0; k < table.labels.size(); ++k) {
    const Matrix& x = table.matrices[k];
    const double c = real_inner(x, a) / real_inner(x, x);
    rest -= c * x;
    if (std::abs(c) > 1e-9) out.push_back({c, table.labels[k]});
  }
  if (residual) *residual = tensor::max_abs(rest);
  return out;
}

IdentityResult check_bracket_identity(const BracketIdentity& id) {
  if (!id.well_formed())
    throw PreconditionError("bracket identity '" + id.name + "' has invalid triples for n = " +
                            std::to_string(id.n));
  const auto& table = generator_table(id.n);
  auto matrix_of = [&](const SymmetricGenerator& g) -> const Matrix& {
    for (std::size_t k = 0; k < table.labels.size(); ++k)
      if (table.labels[k] == g) return table.matrices[k];
    throw PreconditionError("unknown generator " + g.str());
  };

  IdentityResult r;
  r.identity = id;
  const Matrix lhs = tensor::commutator(matrix_of(id.lhs_a), matrix_of(id.lhs_b));
  r.measured = expand_symmetric(id.n, lhs, &r.expansion_residual);
  if (r.expansion_residual > tol::kIdentity)
    throw PreconditionError("identity '" + id.name + "': commutator leaves the symmetric span (" +
                            std::to_string(r.expansion_residual) + ")");

  std::map<std::string, std::pair<double, double>> coeffs;  // stated, measured
  for (const auto& t : id.rhs) coeffs[t.generator.str()].first += t.coefficient;
  for (const auto& t : r.measured) coeffs[t.generator.str()].second += t.coefficient;
  for (const auto& [name, c] : coeffs)
    r.coefficient_deviation = std::max(r.coefficient_deviation, std::abs(c.first - c.second));
  r.holds = r.coefficient_deviation <= tol::kIdentity;

  Matrix rebuilt = Matrix::Zero(lhs.rows(), lhs.cols());
  for (const auto& t : r.measured) rebuilt += t.coefficient * matrix_of(t.generator);
  r.consistency_residual = tensor::max_abs(rebuilt - lhs);
  return r;
}

io::json closure_report(int n, const ClosureOptions& options) {
  ClosureStats stats;
  const auto start = std::chrono::steady_clock::now();
  const LieBasis basis = closure(model_generators(n), options, &stats);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::json j{{"n", n},
             {"generated_dim", basis.size()},
             {"predicted_dim", predicted_dimension(n)},
             {"passes", stats.passes},
             {"brackets", stats.brackets},
             {"seconds", seconds}};
  if (n <= 5) {
    const auto t1 = verify_theorem1(n, options, &basis);
    j["invariance_ok"] = t1.invariance_ok;
    j["max_invariance_residual"] = t1.max_invariance_residual;
    j["membership_ok"] = t1.membership_ok;
  } else {
    double worst = 0.0;
    for (const auto& b : basis.elements()) worst = std::max(worst, spin::permutation_residual(b));
    j["invariance_ok"] = worst <= 1e-10;
    j["max_invariance_residual"] = worst;
  }
  io::json ids = io::json::array();
  for (const auto& id : identity_catalog(n)) ids.push_back(check_bracket_identity(id).to_json());
  j["identity_results"] = std::move(ids);
  return j;
}

}  // namespace symctl::lie
