#pragma once

#include "iqprob/iqprob.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace iqprob::cli {

enum ExitCode : int { ok = 0, validation_error = 1, property_failure = 2 };

/// An Error tied to the input file it came from.
class InputError : public Error {
 public:
  InputError(const Error& e, std::string path) : Error(e.code(), e.message()), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Applies a tolerance spec to `tol`. A bare number sets herm, proj, psd and
/// trace; otherwise a comma-separated list of key=value with keys herm, proj,
/// psd, trace, band, rank.
inline void apply_tolerance_spec(const std::string& spec, Tolerances& tol) {
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "tolerance '" + s + "' is not a number");
    }
    if (used != s.size()) throw Error(ErrorCode::InvalidArgument, "tolerance '" + s + "' is not a number");
    return v;
  };
  if (spec.find('=') == std::string::npos) {
    const double v = number(spec);
    tol.herm = tol.proj = tol.psd = tol.trace = v;
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const double v = number(item.substr(eq + 1));
      if (key == "herm") tol.herm = v;
      else if (key == "proj") tol.proj = v;
      else if (key == "psd") tol.psd = v;
      else if (key == "trace") tol.trace = v;
      else if (key == "band") tol.band = v;
      else if (key == "rank") tol.rank = v;
      else throw Error(ErrorCode::InvalidArgument, "unknown tolerance key '" + key + "'");
    }
  }
  tol.validate();
}

namespace detail {

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e, path);
  } catch (const Json::exception& e) {
    throw InputError(Error(ErrorCode::MalformedInput, e.what()), path);
  }
}

inline Projector load_projector(const std::string& path, const Tolerances& tol) {
  return with_path(path, [&] { return Projector::validate(load_matrix(path), tol); });
}

inline DensityMatrix load_state(const std::string& path, const Tolerances& tol) {
  return with_path(path, [&] { return DensityMatrix::validate(load_matrix(path), tol); });
}

// A resolution file is a JSON array of matrix documents or {"projectors": [...]}.
inline ProjectiveResolution load_resolution(const std::string& path, const Tolerances& tol) {
  return with_path(path, [&] {
    const Json doc = read_json_file(path);
    const Json* list = &doc;
    if (doc.is_object() && doc.contains("projectors")) list = &doc["projectors"];
    if (!list->is_array()) throw Error(ErrorCode::MalformedInput, "resolution must be an array of matrices");
    std::vector<Matrix> ms;
    for (const auto& m : *list) ms.push_back(matrix_from_json(m));
    return ProjectiveResolution::validate(ms, tol);
  });
}

inline Json reconstruction_json(const TwoProjectorDecomposition& d, const Projector& p, const Projector& q) {
  const Matrix& u = d.unitary;
  Matrix cs = d.cos_block * d.cos_block + d.sin_block * d.sin_block - identity(d.m);
  return Json{{"p_error", op_norm(u * d.canonical_p() * u.adjoint() - p.matrix())},
              {"q_error", op_norm(u * d.canonical_q() * u.adjoint() - q.matrix())},
              {"unitarity_error", op_norm(u.adjoint() * u - identity(d.dim()))},
              {"cos_sin_identity_error", d.m > 0 ? op_norm(cs) : 0.0}};
}

inline std::string fixed(double v, int prec = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace detail

/// Runs one command. `env_tol` is the IQPROB_TOL value, if any.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::optional<std::string> env_tol = std::nullopt) {
  CLI::App app{"Lower and upper joint probabilities of non-commuting projectors", "iqprob"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  bool emit_witnesses = false;
  std::vector<std::string> tol_specs;
  std::string method_name = "spectral";
  std::uint64_t seed = 0;
  app.add_flag("--pretty", pretty, "Human-readable output");
  app.add_option("--tol", tol_specs, "Tolerance override: number or key=value[,key=value]");
  app.add_option("--method", method_name, "Intersection method")
      ->check(CLI::IsMember({"spectral", "harmonic-mean", "iterated-limit", "schur-block"}));
  app.add_option("--seed", seed, "Random seed");
  app.add_flag("--emit-witnesses", emit_witnesses, "Include full witness matrices");

  std::string p_path, q_path, rho_path, p2_path, q2_path;

  auto* decompose = app.add_subcommand("decompose", "CS decomposition of a projector pair");
  decompose->add_option("P", p_path)->required();
  decompose->add_option("Q", q_path)->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "Lower and upper probability operators");
  bounds_cmd->add_option("P", p_path)->required();
  bounds_cmd->add_option("Q", q_path)->required();

  bool conditional = false;
  auto* interval = app.add_subcommand("interval", "Probability interval on a state");
  interval->add_option("RHO", rho_path)->required();
  interval->add_option("P", p_path)->required();
  interval->add_option("Q", q_path)->required();
  interval->add_flag("--conditional", conditional, "Condition on Q");

  auto* compare = app.add_subcommand("compare", "Compare two joint events on a state");
  compare->add_option("RHO", rho_path)->required();
  compare->add_option("P1", p_path)->required();
  compare->add_option("Q1", q_path)->required();
  compare->add_option("P2", p2_path)->required();
  compare->add_option("Q2", q2_path)->required();

  std::size_t samples = 10;
  std::size_t random_pairs = 0;
  Index random_dim = 4;
  std::vector<std::string> state_paths;
  auto* axioms = app.add_subcommand("axioms", "Check the axioms for a pair, or for seeded random pairs");
  axioms->add_option("P", p_path);
  axioms->add_option("Q", q_path);
  axioms->add_option("--samples", samples, "Sampled commuting states per pair");
  axioms->add_option("--state", state_paths, "Extra state to test (repeatable)");
  axioms->add_option("--random", random_pairs, "Number of random pairs instead of P, Q");
  axioms->add_option("--dim", random_dim, "Dimension of random pairs")->check(CLI::Range(1, 64));

  auto* nogo = app.add_subcommand("nogo", "No-go certificate for two projective resolutions");
  nogo->add_option("PRES", p_path)->required();
  nogo->add_option("QRES", q_path)->required();

  std::string order = "pq";
  bool marginals = false;
  auto* twotime = app.add_subcommand("twotime", "Two-time measurement probability");
  twotime->add_option("RHO", rho_path)->required();
  twotime->add_option("P", p_path)->required();
  twotime->add_option("Q", q_path)->required();
  twotime->add_option("--order", order, "pq, qp or mean")->check(CLI::IsMember({"pq", "qp", "mean"}));
  twotime->add_flag("--marginals", marginals, "P and Q are resolutions; report the marginal defects");

  std::string measure_path;
  auto* classical_cmd = app.add_subcommand("classical", "Classical axiom and inequality report");
  classical_cmd->add_option("MEASURE", measure_path)->required();

  bool reproduce = false;
  auto* spin1 = app.add_subcommand("spin1", "Spin-1 catalog and golden tables");
  spin1->add_flag("--reproduce", reproduce, "Recompute and compare every table");

  std::size_t trials = 10000;
  auto* witnesses = app.add_subcommand("witnesses", "Seeded searches for the negative-result witnesses");
  witnesses->add_option("--trials", trials, "Budget per search");

  std::vector<std::string> argv_store{"iqprob"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  Json doc{{"schema", schema_version}};
  auto emit = [&](const Json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };
  auto fail = [&](const std::string& code, const std::string& message, const std::string& path) {
    Json e{{"code", code}, {"message", message}};
    e["path"] = path.empty() ? Json(nullptr) : Json(path);
    emit(Json{{"schema", schema_version}, {"error", e}});
    err << "iqprob: " << code << ": " << message << (path.empty() ? "" : " (" + path + ")") << '\n';
    return validation_error;
  };

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    return fail("InvalidArgument", e.what(), "");
  }

  try {
    Tolerances tol;
    if (env_tol && !env_tol->empty()) apply_tolerance_spec(*env_tol, tol);
    for (const auto& s : tol_specs) apply_tolerance_spec(s, tol);
    const auto method = parse_intersection_method(method_name);

    if (*decompose) {
      const auto p = detail::load_projector(p_path, tol);
      const auto q = detail::load_projector(q_path, tol);
      if (p.dim() != q.dim()) throw InputError(Error(ErrorCode::DimensionMismatch, "P and Q differ in dimension"), q_path);
      const auto d = cs_decompose(p, q, tol);
      doc["command"] = "decompose";
      doc["decomposition"] = to_json(d);
      doc["reconstruction"] = detail::reconstruction_json(d, p, q);
      emit(doc);
      return ok;
    }

    if (*bounds_cmd) {
      const auto p = detail::load_projector(p_path, tol);
      const auto q = detail::load_projector(q_path, tol);
      if (p.dim() != q.dim()) throw InputError(Error(ErrorCode::DimensionMismatch, "P and Q differ in dimension"), q_path);
      doc["command"] = "bounds";
      doc["method"] = std::string(to_string(method));
      doc["bounds"] = to_json(bounds(p, q, tol, method));
      emit(doc);
      return ok;
    }

    if (*interval) {
      const auto rho = detail::load_state(rho_path, tol);
      const auto p = detail::load_projector(p_path, tol);
      const auto q = detail::load_projector(q_path, tol);
      doc["command"] = "interval";
      doc["conditional"] = conditional;
      doc["interval"] = to_json(conditional ? conditional_interval(rho, p, q, tol) : probability_interval(rho, p, q, tol));
      emit(doc);
      return ok;
    }

    if (*compare) {
      const auto rho = detail::load_state(rho_path, tol);
      const ProjectorPair first{detail::load_projector(p_path, tol), detail::load_projector(q_path, tol)};
      const ProjectorPair second{detail::load_projector(p2_path, tol), detail::load_projector(q2_path, tol)};
      const auto a = probability_interval(rho, first.p, first.q, tol);
      const auto b = probability_interval(rho, second.p, second.q, tol);
      const auto ab = sure_dominance(rho, first, second, tol);
      const auto ba = sure_dominance(rho, second, first, tol);
      doc["command"] = "compare";
      doc["first"] = to_json(a);
      doc["second"] = to_json(b);
      doc["hausdorff_distance"] = interval_distance(a, b);
      doc["first_surely_more_probable"] = Json{{"holds", ab.surely_more_probable}, {"margin", ab.margin}};
      doc["second_surely_more_probable"] = Json{{"holds", ba.surely_more_probable}, {"margin", ba.margin}};
      doc["first_over_second_spectrum"] = to_json(dominance_spectrum(first, second, tol));
      doc["second_over_first_spectrum"] = to_json(dominance_spectrum(second, first, tol));
      emit(doc);
      return ok;
    }

    if (*axioms) {
      AxiomOptions opts;
      opts.samples = samples;
      opts.seed = seed;
      doc["command"] = "axioms";
      if (random_pairs > 0) {
        Rng rng(seed);
        Json pairs = Json::array();
        std::size_t failed = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < random_pairs; ++k) {
          const auto p = random_projector(random_dim, rng);
          const auto q = random_projector(random_dim, rng);
          opts.seed = seed + k + 1;
          const auto rep = check_axioms(p, q, {}, opts, tol);
          if (!rep.all_pass()) ++failed;
          for (const auto& r : rep.results) worst = std::min(worst, r.worst_margin);
          Json entry{{"index", k}, {"rank_p", p.rank()}, {"rank_q", q.rank()}, {"pass", rep.all_pass()}};
          if (!rep.all_pass() || emit_witnesses) entry["report"] = to_json(rep, emit_witnesses);
          pairs.push_back(std::move(entry));
        }
        doc["random"] = Json{{"pairs", random_pairs}, {"dim", random_dim}, {"seed", seed}};
        doc["failed"] = failed;
        doc["worst_margin"] = worst;
        doc["pass"] = failed == 0;
        doc["pairs"] = std::move(pairs);
        emit(doc);
        return failed == 0 ? ok : property_failure;
      }
      if (p_path.empty() || q_path.empty())
        throw Error(ErrorCode::InvalidArgument, "axioms needs P and Q, or --random N");
      const auto p = detail::load_projector(p_path, tol);
      const auto q = detail::load_projector(q_path, tol);
      std::vector<DensityMatrix> states;
      for (const auto& s : state_paths) states.push_back(detail::load_state(s, tol));
      const auto rep = check_axioms(p, q, states, opts, tol);
      doc["report"] = to_json(rep, emit_witnesses);
      emit(doc);
      return rep.all_pass() ? ok : property_failure;
    }

    if (*nogo) {
      const auto pres = detail::load_resolution(p_path, tol);
      const auto qres = detail::load_resolution(q_path, tol);
      if (pres.dim() != qres.dim())
        throw InputError(Error(ErrorCode::DimensionMismatch, "resolutions differ in dimension"), q_path);
      doc["command"] = "nogo";
      doc["certificate"] = to_json(no_go_certificate(pres, qres, tol), emit_witnesses);
      emit(doc);
      return ok;
    }

    if (*twotime) {
      const auto rho = detail::load_state(rho_path, tol);
      doc["command"] = "twotime";
      if (marginals) {
        const auto pres = detail::load_resolution(p_path, tol);
        const auto qres = detail::load_resolution(q_path, tol);
        doc["marginals"] = to_json(marginal_defect(rho, pres, qres));
        emit(doc);
        return ok;
      }
      const auto p = detail::load_projector(p_path, tol);
      const auto q = detail::load_projector(q_path, tol);
      doc["order"] = order;
      doc["value"] = order == "mean"  ? two_time_mean(rho, p, q)
                     : order == "pq" ? two_time_probability(rho, p, q, MeasurementOrder::PQ)
                                     : two_time_probability(rho, p, q, MeasurementOrder::QP);
      doc["additive_joint"] = rho.expectation(p.matrix() * q.matrix());
      emit(doc);
      return ok;
    }

    if (*classical_cmd) {
      const auto m = detail::with_path(measure_path, [&] {
        const Json j = read_json_file(measure_path);
        return j.contains("distributions") ? classical::envelope(classical::credal_from_json(j))
                                           : classical::measure_from_json(j);
      });
      classical::ClassicalCheckOptions opts;
      opts.seed = seed;
      const auto ax = classical::check_axioms_classical(m, opts);
      const auto derived = classical::check_derived_inequalities(m, opts);
      doc["command"] = "classical";
      doc["n"] = m.space().outcomes();
      doc["axioms"] = classical::to_json(ax);
      doc["derived"] = classical::to_json(derived);
      doc["pass"] = ax.all_pass() && derived.all_pass();
      emit(doc);
      return ax.all_pass() && derived.all_pass() ? ok : property_failure;
    }

    if (*spin1) {
      const auto& c = spin::spin1_catalog();
      if (!reproduce) {
        doc["command"] = "spin1";
        Json ops, projs;
        for (auto a : spin::axes) {
          const std::string name(1, spin::axis_name(a));
          ops[name] = matrix_to_json(c.op(a));
          for (int j : c.labels()) projs[name][std::to_string(j)] = matrix_to_json(c.projector(a, j).matrix());
        }
        doc["operators"] = std::move(ops);
        doc["projectors"] = std::move(projs);
        emit(doc);
        return ok;
      }
      const auto report = spin::reproduce_tables(tol);
      if (pretty) {
        std::size_t width = 0;
        for (const auto& r : report.rows) width = std::max(width, r.id.size());
        for (const auto& r : report.rows)
          out << std::left << std::setw(static_cast<int>(width) + 2) << r.id << (r.pass ? "ok    " : "FAIL  ")
              << detail::fixed(r.max_deviation) << "  " << r.description << '\n';
        out << "max deviation " << detail::fixed(report.max_deviation()) << " over " << report.rows.size()
            << " rows\n";
      } else {
        doc["command"] = "spin1";
        doc["report"] = spin::to_json(report);
        emit(doc);
      }
      return report.all_pass() ? ok : property_failure;
    }

    if (*witnesses) {
      const auto sub = find_non_subadditivity_witness(seed, trials, 1e-10, tol);
      const auto mean = find_mean_incompatibility(seed, trials);
      Json s{{"found", sub.found}, {"trials", sub.trials}};
      if (sub.found) {
        s["excess_eigenvalues"] = real_vector_json(sub.excess_eigenvalues);
        if (emit_witnesses) s["p"] = matrix_to_json(sub.p);
      } else {
        s["status"] = "not found";
      }
      doc["command"] = "witnesses";
      doc["non_subadditivity"] = std::move(s);
      doc["mean_incompatibility"] = to_json(mean, emit_witnesses);
      emit(doc);
      return ok;
    }
  } catch (const InputError& e) {
    return fail(std::string(to_string(e.code())), e.message(), e.path());
  } catch (const Error& e) {
    return fail(std::string(to_string(e.code())), e.message(), "");
  }
  return fail("InvalidArgument", "no subcommand", "");
}

}  // namespace iqprob::cli
