#ifndef MDL_SELECT_HPP
#define MDL_SELECT_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdl/codelen.hpp"
#include "mdl/universal.hpp"

namespace mdl {

/// How candidate indices are encoded.
enum class IndexCode {
  /// log2 M for a menu of M models; shifts every total equally.
  FiniteUniform,
  /// 2 log2(k+1) + 1 for the k-th entry (0-based) of an open-ended list.
  Integer,
};

struct RankedModel {
  std::string id;
  /// Position in the candidate list (0-based).
  std::size_t index = 0;
  Bits index_code;
  Bits code_total;
  Bits grand_total;
};

struct SelectionRanking {
  /// Ascending by grand_total; ties keep the smaller index first.
  std::vector<RankedModel> entries;
  std::string selected;
  std::size_t selected_index = 0;
  /// Runner-up minus winner, +infinity with a single candidate.
  Bits confidence;
};

/// Ranks candidates by index codelength plus code total. A NaN total is
/// treated as +infinity, so a model whose codelength cannot be computed loses.
inline SelectionRanking select_model(std::span<const UniversalCodeReport> candidates,
                                     IndexCode index_code) {
  if (candidates.empty()) throw std::invalid_argument("select_model: no candidates");
  SelectionRanking out;
  out.entries.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    RankedModel m;
    m.id = candidates[i].model;
    m.index = i;
    m.index_code = index_code == IndexCode::FiniteUniform
                       ? uniform_codelength(static_cast<std::int64_t>(candidates.size()))
                       : integer_codelength(static_cast<std::int64_t>(i) + 1);
    m.code_total = std::isnan(candidates[i].total.value()) ? Bits::infinity() : candidates[i].total;
    m.grand_total = m.index_code + m.code_total;
    out.entries.push_back(std::move(m));
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const RankedModel& a, const RankedModel& b) {
                     if (a.grand_total != b.grand_total) return a.grand_total < b.grand_total;
                     return a.index < b.index;
                   });
  out.selected = out.entries.front().id;
  out.selected_index = out.entries.front().index;
  if (out.entries.size() == 1) {
    out.confidence = Bits::infinity();
  } else if (out.entries[1].grand_total.is_infinite() && out.entries[0].grand_total.is_infinite()) {
    out.confidence = Bits(0.0);
  } else {
    out.confidence = out.entries[1].grand_total - out.entries[0].grand_total;
  }
  return out;
}

/// Universal codes offered for Markov order selection.
enum class MarkovCode {
  BayesJeffreys,
  BayesUniform,
  TwoPartCrude,
  TwoPartRefined,
  PluginJeffreys,
  PluginLaplace,
  NmlExact,
  NmlAsymptotic,
  /// Maximized likelihood only, no complexity term (the naive GLRT score).
  MaxLikelihood,
};

inline MarkovCode parse_markov_code(std::string_view s) {
  if (s == "bayes-jeffreys" || s == "bayes") return MarkovCode::BayesJeffreys;
  if (s == "bayes-uniform") return MarkovCode::BayesUniform;
  if (s == "two-part-crude" || s == "crude") return MarkovCode::TwoPartCrude;
  if (s == "two-part" || s == "two-part-refined") return MarkovCode::TwoPartRefined;
  if (s == "plugin" || s == "plugin-jeffreys") return MarkovCode::PluginJeffreys;
  if (s == "plugin-laplace") return MarkovCode::PluginLaplace;
  if (s == "nml" || s == "nml-exact") return MarkovCode::NmlExact;
  if (s == "nml-asymptotic" || s == "asymptotic") return MarkovCode::NmlAsymptotic;
  if (s == "ml") return MarkovCode::MaxLikelihood;
  throw std::invalid_argument("unknown Markov code '" + std::string(s) + "'");
}

/// Codelength of x under the order-k chain family with the given code.
/// Two-part reports leave out the order index; select_model adds it.
inline UniversalCodeReport markov_code_report(const BinarySequence& x, unsigned order,
                                              MarkovCode code) {
  switch (code) {
    case MarkovCode::BayesJeffreys: return bayes_report(x, order, PriorSpec::jeffreys());
    case MarkovCode::BayesUniform: return bayes_report(x, order, PriorSpec::uniform());
    case MarkovCode::TwoPartCrude:
      return twopart_codelength(x, order, {GridSpec::Mode::Crude, false});
    case MarkovCode::TwoPartRefined:
      return twopart_codelength(x, order, {GridSpec::Mode::Refined, false});
    case MarkovCode::PluginJeffreys: return plugin_report(x, order, 0.5);
    case MarkovCode::PluginLaplace: return plugin_report(x, order, 1.0);
    case MarkovCode::NmlExact: {
      const ModelFamily f = ModelFamily::markov(order);
      return nml_codelength(x, f, comp_exact_markov(x.size(), order));
    }
    case MarkovCode::NmlAsymptotic: return nml_asymptotic_codelength(x, ModelFamily::markov(order));
    case MarkovCode::MaxLikelihood: {
      UniversalCodeReport r;
      r.model = ModelFamily::markov(order).id();
      r.code = CodeKind::MaxLikelihood;
      r.data_fit = ModelFamily::markov(order).ml_neg_loglik(x);
      r.complexity = Bits(0.0);
      r.total = r.data_fit;
      return r;
    }
  }
  throw std::invalid_argument("markov_code_report: unknown code");
}

struct MarkovSelection {
  unsigned order = 0;
  SelectionRanking ranking;
  std::vector<UniversalCodeReport> reports;
};

/// Orders 0..max_order, integer index code on k+1.
inline MarkovSelection select_markov_order(const BinarySequence& x, unsigned max_order,
                                           MarkovCode code) {
  if (max_order >= x.size()) {
    throw std::domain_error("select_markov_order: max order " + std::to_string(max_order) +
                            " must be below n=" + std::to_string(x.size()));
  }
  MarkovSelection sel;
  sel.reports.reserve(max_order + 1);
  for (unsigned k = 0; k <= max_order; ++k) sel.reports.push_back(markov_code_report(x, k, code));
  sel.ranking = select_model(sel.reports, IndexCode::Integer);
  sel.order = static_cast<unsigned>(sel.ranking.selected_index);
  return sel;
}

}  // namespace mdl

#endif  // MDL_SELECT_HPP
