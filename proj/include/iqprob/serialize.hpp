#pragma once

// JSON views of the library's results. Matrices use the shared file format.

#include "iqprob/classical_ip.hpp"
#include "iqprob/imprecise_probability.hpp"
#include "iqprob/matrix_io.hpp"
#include "iqprob/measurement_models.hpp"
#include "iqprob/projector_geometry.hpp"
#include "iqprob/spin.hpp"

#include <string>
#include <vector>

namespace iqprob {

inline constexpr const char* schema_version = "iqprob/1";

inline Json real_vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

inline Json to_json(const TwoProjectorDecomposition& d) {
  Json angles = Json::array(), cos2 = Json::array();
  for (double a : d.principal_angles) {
    angles.push_back(a);
    cos2.push_back(std::cos(a) * std::cos(a));
  }
  return Json{
      {"dim", d.dim()},
      {"blocks", {{"generic", d.m}, {"h11", d.m11}, {"h10", d.m10}, {"h01", d.m01}, {"h00", d.m00}}},
      {"principal_angles", std::move(angles)},
      {"cos2", std::move(cos2)},
      {"unitary", matrix_to_json(d.unitary)},
      {"canonical_p", matrix_to_json(d.canonical_p())},
      {"canonical_q", matrix_to_json(d.canonical_q())},
      {"pi11", matrix_to_json(d.pi11.matrix())},
      {"pi10", matrix_to_json(d.pi10.matrix())},
      {"pi01", matrix_to_json(d.pi01.matrix())},
      {"pi00", matrix_to_json(d.pi00.matrix())},
  };
}

inline Json to_json(const ProbabilityInterval& i) {
  return Json{{"lower", i.lower()}, {"upper", i.upper()}, {"width", i.width()}};
}

inline Json to_json(const ProbabilityOperatorPair& b) {
  return Json{{"lower", matrix_to_json(b.lower.matrix())},
              {"upper", matrix_to_json(b.upper.matrix())},
              {"uncertainty_spectrum", real_vector_json(eigh(HermitianOperator::hermitian_part(b.uncertainty())).values)},
              {"commuting", commutes(b.p.matrix(), b.q.matrix(), 1e-10)}};
}

inline Json to_json(const AxiomResult& r, bool emit_witness = true) {
  Json out{{"name", r.name}, {"description", r.description}, {"applicable", r.applicable},
           {"pass", r.pass}, {"worst_margin", r.worst_margin}};
  if (emit_witness && r.witness) out["witness"] = matrix_to_json(*r.witness);
  return out;
}

inline Json to_json(const AxiomReport& r, bool emit_witnesses = true) {
  Json results = Json::array();
  for (const auto& a : r.results) results.push_back(to_json(a, emit_witnesses));
  return Json{{"pass", r.all_pass()},
              {"tolerance", r.tolerance},
              {"sampled_states", r.sampled_states},
              {"supplied_states_used", r.supplied_states_used},
              {"supplied_states_skipped", r.supplied_states_skipped},
              {"state_sampling_is_evidence_only", true},
              {"axioms", std::move(results)}};
}

inline Json to_json(const DominanceSpectrum& d) {
  Json out{{"eigenvalues", real_vector_json(d.eigenvalues)}};
  out["witness_state"] = d.witness ? vector_json(*d.witness) : Json(nullptr);
  return out;
}

inline Json to_json(const NoGoCertificate& c, bool emit_witnesses = false) {
  Json zeros_list = Json::array();
  for (const auto& [k, i] : c.forced_zero) zeros_list.push_back(Json::array({k, i}));
  Json ranks = Json::array();
  for (const auto& row : c.pi) {
    Json r = Json::array();
    for (const auto& g : row) r.push_back(g.rank());
    ranks.push_back(std::move(r));
  }
  Json out{{"no_additive_joint", c.no_additive_joint},
           {"tolerance", c.tolerance},
           {"defect_spectrum", real_vector_json(c.defect_spectrum)},
           {"defect_rank", c.defect_rank},
           {"trace_defect", c.trace_defect},
           {"forced_zero", std::move(zeros_list)},
           {"intersection_ranks", std::move(ranks)}};
  if (emit_witnesses) {
    out["defect"] = matrix_to_json(c.defect);
    Json pis = Json::array();
    for (const auto& row : c.pi) {
      Json r = Json::array();
      for (const auto& g : row) r.push_back(matrix_to_json(g.matrix()));
      pis.push_back(std::move(r));
    }
    out["pi"] = std::move(pis);
  }
  return out;
}

inline Json to_json(const MarginalDefect& m) {
  return Json{{"joint", m.joint},
              {"first_marginal_defect", m.first},
              {"second_marginal_defect", m.second},
              {"first_marginal_exact", m.first_exact},
              {"max_first", m.max_first},
              {"max_second", m.max_second}};
}

inline Json to_json(const MeanIncompatibility& m, bool emit_witnesses = false) {
  auto side = [&](const std::optional<MeanWitness>& w, std::size_t trials) {
    Json out{{"found", w.has_value()}, {"trials", trials}};
    if (w) {
      out["mean"] = w->mean;
      out["joint"] = w->joint;
      out["trial"] = w->trial;
      if (emit_witnesses) {
        out["rho"] = matrix_to_json(w->rho);
        out["p"] = matrix_to_json(w->p);
        out["q"] = matrix_to_json(w->q);
      }
    } else {
      out["status"] = "not found";
    }
    return out;
  };
  return Json{{"seed", m.seed}, {"above", side(m.above, m.trials_above)}, {"below", side(m.below, m.trials_below)}};
}

namespace classical {

inline Json to_json(const ImpreciseMeasure& m) {
  return Json{{"n", m.space().outcomes()}, {"lower", m.lower_values()}, {"upper", m.upper_values()}};
}

inline ImpreciseMeasure measure_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("lower") || !doc.contains("upper"))
    throw Error(ErrorCode::MalformedInput, "measure document needs \"n\", \"lower\" and \"upper\"");
  if (!doc["n"].is_number_integer()) throw Error(ErrorCode::MalformedInput, "\"n\" must be an integer");
  const auto n = doc["n"].get<long long>();
  if (n < 1 || n > EventSpace::max_outcomes)
    throw Error(ErrorCode::InvalidMeasure, "\"n\" must be in 1..20");
  auto values = [&](const char* key) {
    const Json& a = doc[key];
    if (!a.is_array()) throw Error(ErrorCode::MalformedInput, std::string("\"") + key + "\" must be an array");
    std::vector<double> out;
    for (const auto& x : a) {
      if (!x.is_number()) throw Error(ErrorCode::MalformedInput, std::string("\"") + key + "\" must hold numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  return {EventSpace(static_cast<unsigned>(n)), values("lower"), values("upper")};
}

inline Json to_json(const CredalSet& c) { return Json{{"n", c.space().outcomes()}, {"distributions", c.distributions()}}; }

inline CredalSet credal_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("distributions"))
    throw Error(ErrorCode::MalformedInput, "credal document needs \"n\" and \"distributions\"");
  try {
    return {EventSpace(doc["n"].get<unsigned>()), doc["distributions"].get<std::vector<std::vector<double>>>()};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
}

inline Json to_json(const ClassicalReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"name", c.name},
                          {"statement", c.statement},
                          {"pass", c.pass},
                          {"worst_margin", c.worst_margin},
                          {"checked", c.checked},
                          {"witness", Json::array({c.witness_a, c.witness_b})}});
  return Json{{"pass", r.all_pass()}, {"exhaustive", r.exhaustive}, {"tolerance", r.tolerance}, {"checks", checks}};
}

}  // namespace classical

namespace spin {

inline Json to_json(const TableReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"id", row.id}, {"description", row.description}, {"max_deviation", row.max_deviation},
                        {"pass", row.pass}});
  return Json{{"pass", r.all_pass()}, {"tolerance", r.tolerance}, {"max_deviation", r.max_deviation()},
              {"rows", std::move(rows)}};
}

}  // namespace spin

}  // namespace iqprob
