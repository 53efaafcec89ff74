#include "bfo/split.hpp"

#include <algorithm>
#include <set>

#include "bfo/bf.hpp"
#include "bfo/canonical.hpp"

namespace bfo {

namespace {

struct Branch {
  std::vector<Var> vars;
  FormulaPtr leaf;
};

void flatten(const FormulaPtr& f, std::vector<Var> vars, std::vector<Branch>& out) {
  if (f->node == Formula::Node::Or && !f->family) {
    for (auto& c : f->children) flatten(c, vars, out);
    return;
  }
  if (f->node == Formula::Node::Exists) {
    auto vs = vars;
    vs.insert(vs.end(), f->qvars.begin(), f->qvars.end());
    flatten(f->body, std::move(vs), out);
    return;
  }
  out.push_back(Branch{std::move(vars), f});
}

bool find_witness(const LabeledFiniteOrder& A, Env& env, const Branch& br, size_t at,
                  std::vector<uint32_t>& vals) {
  if (at == br.vars.size()) return eval(A, env, br.leaf);
  for (uint32_t x = 0; x < A.size; ++x) {
    env.vals[br.vars[at]] = x;
    vals.push_back(x);
    if (find_witness(A, env, br, at + 1, vals)) return true;
    vals.pop_back();
  }
  env.vals.erase(br.vars[at]);
  return false;
}

}  // namespace

std::vector<FormulaPtr> interval_split(const LabeledFiniteOrder& A,
                                       const std::vector<uint32_t>& a, const FormulaPtr& f) {
  if (!A.pure()) throw FormulaError("interval splitting works on pure orders");
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i] <= a[i - 1]) throw FormulaError("tuple must be strictly increasing");
  auto fv = free_vars(f);
  if (fv.size() > a.size()) throw FormulaError("free variables exceed the tuple");
  ComplexityTag tag = classify(f);
  uint32_t n = tag.e;

  Env env;
  for (size_t i = 0; i < a.size(); ++i) env.vals["x" + std::to_string(i)] = a[i];
  for (auto& v : fv)
    if (!env.vals.count(v)) throw FormulaError("free variable " + v + " is not a tuple slot");

  std::vector<Branch> branches;
  flatten(f, {}, branches);

  const Branch* hit = nullptr;
  std::vector<uint32_t> witness;
  for (auto& br : branches) {
    std::vector<uint32_t> vals;
    Env e = env;
    if (find_witness(A, e, br, 0, vals)) {
      hit = &br;
      witness = std::move(vals);
      break;
    }
  }
  if (!hit) throw FormulaError("the tuple does not satisfy the formula");

  uint32_t beta = is_finitary_qf(hit->leaf) ? 0 : classify(hit->leaf).abar;
  if (beta + 1 > std::max(n, 1u))
    throw FormulaError("formula is not within the declared existential class");

  // split the witness values into the open intervals of A around the tuple
  size_t k = a.size();
  std::vector<std::set<uint32_t>> cuts(k + 1);
  for (uint32_t c : witness) {
    if (std::find(a.begin(), a.end(), c) != a.end()) continue;  // pinned to a tuple slot
    size_t i = 0;
    while (i < k && c > a[i]) ++i;
    cuts[i].insert(c);
  }

  std::vector<FormulaPtr> out;
  for (size_t i = 0; i <= k; ++i) {
    int64_t lo = (i == 0) ? -1 : (int64_t)a[i - 1];
    int64_t hi = (i == k) ? (int64_t)A.size : (int64_t)a[i];
    std::vector<int64_t> pts{lo};
    for (uint32_t c : cuts[i]) pts.push_back(c);
    pts.push_back(hi);

    size_t m = cuts[i].size();
    if (m == 0) {
      if (beta == 0) {
        out.push_back(f_true());
      } else {
        out.push_back(canonical_ge_formula(substructure(A, lo, hi), {}, beta));
      }
      continue;
    }
    std::vector<Var> zs;
    for (size_t j = 0; j < m; ++j) zs.push_back("s" + std::to_string(j));
    std::vector<FormulaPtr> body;
    for (size_t j = 0; j + 1 < m; ++j) body.push_back(f_lt(zs[j], zs[j + 1]));
    for (size_t j = 0; j + 1 < pts.size(); ++j) {
      // piece between the sub-cut points pts[j], pts[j+1], relative to the
      // interval: the element coordinates are witness positions in A
      std::optional<Var> lo_var = (j == 0) ? std::nullopt : std::optional<Var>(zs[j - 1]);
      std::optional<Var> hi_var = (j + 1 == pts.size() - 1)
                                      ? std::nullopt
                                      : std::optional<Var>(zs[j]);
      if (beta == 0) continue;  // quantifier-free leaves only need the pattern
      FormulaPtr chi = canonical_ge_formula(substructure(A, pts[j], pts[j + 1]), {}, beta);
      body.push_back(relativize(chi, lo_var, hi_var));
    }
    out.push_back(f_exists(zs, f_and(std::move(body))));
  }
  return out;
}

}  // namespace bfo
