#pragma once

// Command-line front end: faces, lagrangian, fiber, verify, render, polytope.

#include "gcfibers/gcfibers.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gcf::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kInternal = 3 };

struct RunConfig {
  std::string command;
  std::string lambda_text;
  LambdaSpec lambda;
  std::string face;             // content id (or unique prefix), "all" or "improper"
  std::string face_equalities;  // "u11=u12,u13=4"
  std::string point;            // "u11=1/2,u12=1,..."
  int samples = 20;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string format;
  std::string out;
  int jobs = 1;
  std::string overlay;  // "w2"
};

struct Result {
  std::string text;
  int code = kOk;
};

/// Runs body(i) for i in [0, count) on up to `jobs` threads; results are stored by index.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline GCPoint parse_point(const std::string& text, const LambdaSpec& spec) {
  GCPoint p(spec);
  std::vector<char> seen(static_cast<std::size_t>((spec.n() + 1) * (spec.n() + 1)), 0);
  for (const auto& eq : parse_equalities(text, spec)) {
    if (eq.y) throw DomainError("point entries must be values, got " + eq.str());
    if (constant_value(spec, eq.x)) {
      if (*constant_value(spec, eq.x) != eq.value)
        throw DomainError(cell_name(eq.x) + " is constant " + constant_value(spec, eq.x)->str());
      continue;
    }
    p.set(eq.x, eq.value);
    seen[static_cast<std::size_t>(eq.x.i * (spec.n() + 1) + eq.x.j)] = 1;
  }
  for (Cell c : nonconstant_indices(spec).nonconstant)
    if (!seen[static_cast<std::size_t>(c.i * (spec.n() + 1) + c.j)])
      throw DomainError("point does not assign " + cell_name(c));
  return p;
}

/// Faces named by the selectors; with no selector, `default_all` decides between all faces and an error.
inline std::vector<Face> select_faces(const RunConfig& cfg, const DiagramPtr& d, bool default_all) {
  int selectors = !cfg.face.empty() + !cfg.face_equalities.empty() + !cfg.point.empty();
  if (selectors > 1) throw DomainError("use only one of --face, --face-by-equalities, --point");
  if (!cfg.face_equalities.empty()) return {face_by_equalities(d, cfg.face_equalities)};
  if (!cfg.point.empty()) return {locate_face(parse_point(cfg.point, d->spec()), d, cfg.tol)};
  if (cfg.face == "improper") return {improper_face(d)};
  if (cfg.face.empty() && !default_all) throw DomainError("select a face with --face, --face-by-equalities or --point");
  auto faces = enumerate_faces(d);
  if (cfg.face.empty() || cfg.face == "all") return faces;
  std::vector<Face> hits;
  for (auto& f : faces)
    if (f.id().rfind(cfg.face, 0) == 0) hits.push_back(f);
  if (hits.empty()) throw DomainError("no face with id '" + cfg.face + "' (list them with the faces command)");
  if (hits.size() > 1) throw DomainError("face id prefix '" + cfg.face + "' is ambiguous");
  return hits;
}

inline void check_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (cfg.format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw DomainError("format '" + cfg.format + "' is not available for " + cfg.command + " (use " + list + ")");
}

inline std::string header(const LambdaSpec& spec) {
  return "lambda: " + spec.str() + "  (n=" + std::to_string(spec.n()) +
         ", dim_C=" + std::to_string(complex_dimension(spec)) + ")\n";
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (int x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

inline std::string blocks_string(const std::vector<LBlock>& blocks) {
  std::string out;
  for (const auto& b : blocks) out += (out.empty() ? "" : " ") + b.str();
  return out.empty() ? "-" : out;
}

inline Result cmd_faces(const RunConfig& cfg) {
  check_format(cfg, {"table", "json"});
  auto d = build_ladder(cfg.lambda);
  auto faces = select_faces(cfg, d, true);
  std::vector<int> fvec;
  for (const auto& f : faces) {
    int dim = face_dimension(f);
    if (static_cast<int>(fvec.size()) <= dim) fvec.resize(dim + 1, 0);
    ++fvec[dim];
  }
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& f : faces) {
      Json rec = face_json(f);
      rec["equalities"] = psi(f).str();
      arr.push_back(rec);
    }
    Json doc = {{"lambda", lambda_json(cfg.lambda)}, {"faces", arr}, {"f_vector", fvec}};
    return {doc.dump(2) + "\n"};
  }
  std::ostringstream os;
  os << header(cfg.lambda);
  os << std::left << std::setw(18) << "id" << std::setw(5) << "dim" << "equalities\n";
  for (const auto& f : faces) {
    auto eq = psi(f).str();
    os << std::setw(18) << f.id() << std::setw(5) << face_dimension(f) << (eq.empty() ? "-" : eq) << '\n';
  }
  os << "f-vector: " << join_ints(fvec) << "  (" << faces.size() << " faces)\n";
  return {os.str()};
}

struct Classified {
  Face face;
  FiberDescriptor fiber;
  LagrangianReport lag;
};

inline std::vector<Classified> classify(const std::vector<Face>& faces, int jobs) {
  std::vector<Classified> out(faces.size());
  parallel_for(faces.size(), jobs, [&](std::size_t i) {
    out[i].face = faces[i];
    out[i].fiber = fiber_descriptor(faces[i]);
    out[i].lag = lagrangian_classification(faces[i], out[i].fiber);
  });
  return out;
}

inline Result cmd_lagrangian(const RunConfig& cfg) {
  check_format(cfg, {"table", "json"});
  auto d = build_ladder(cfg.lambda);
  auto all = classify(select_faces(cfg, d, true), cfg.jobs);
  const auto full = d->full_mask();
  std::vector<const Classified*> hits;
  for (const auto& c : all)
    if (c.lag.is_lagrangian) hits.push_back(&c);
  int proper = 0;
  for (auto* c : hits) proper += !(c->face.mask() == full);
  const int improper = static_cast<int>(hits.size()) - proper;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (auto* c : hits) {
      Json rec = fiber_json(c->face, c->fiber, c->lag);
      rec["proper"] = !(c->face.mask() == full);
      rec["dim"] = face_dimension(c->face);
      rec["equalities"] = psi(c->face).str();
      arr.push_back(rec);
    }
    Json doc = {{"lambda", lambda_json(cfg.lambda)}, {"lagrangian", arr}, {"proper", proper}, {"improper", improper}};
    return {doc.dump(2) + "\n"};
  }
  std::ostringstream os;
  os << header(cfg.lambda);
  os << std::left << std::setw(18) << "id" << std::setw(5) << "dim" << std::setw(10) << "kind" << std::setw(28)
     << "fiber" << "rigid L-blocks\n";
  for (auto* c : hits)
    os << std::setw(18) << c->face.id() << std::setw(5) << face_dimension(c->face) << std::setw(10)
       << (c->face.mask() == full ? "improper" : "proper") << std::setw(28) << torus_factorization(c->fiber).str()
       << blocks_string(c->lag.blocks) << '\n';
  os << "proper Lagrangian faces: " << proper << "\nimproper: " << improper << '\n';
  return {os.str()};
}

inline Result cmd_fiber(const RunConfig& cfg) {
  check_format(cfg, {"table", "json"});
  auto d = build_ladder(cfg.lambda);
  auto all = classify(select_faces(cfg, d, true), cfg.jobs);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& c : all) {
      Json rec = fiber_json(c.face, c.fiber, c.lag);
      rec["dim"] = face_dimension(c.face);
      rec["equalities"] = psi(c.face).str();
      arr.push_back(rec);
    }
    Json doc = {{"lambda", lambda_json(cfg.lambda)}, {"fibers", arr}};
    return {doc.dump(2) + "\n"};
  }
  std::ostringstream os;
  os << header(cfg.lambda);
  for (const auto& c : all) {
    auto eq = psi(c.face).str();
    os << "face " << c.face.id() << " (dim " << face_dimension(c.face) << "): " << (eq.empty() ? "-" : eq) << '\n';
    for (const auto& s : c.fiber.stages) {
      os << "  stage " << s.k << ":";
      for (int x : s.factors) os << ' ' << factor_name(x);
      os << '\n';
    }
    auto tf = torus_factorization(c.fiber);
    auto hi = homotopy_invariants(c.fiber);
    os << "  fiber: " << c.fiber.bundle << '\n';
    os << "  dimension: " << c.fiber.total_dim << (c.lag.is_lagrangian ? " (Lagrangian)" : "") << '\n';
    os << "  torus factorization: " << tf.str() << "  (r=" << tf.r << ", Y=" << tf.y << ")\n";
    os << "  pi1 rank " << hi.pi1_rank << ", pi2 trivial\n";
    os << "  rigid L-blocks: " << blocks_string(c.lag.blocks) << '\n';
  }
  return {os.str()};
}

inline Result cmd_verify(const RunConfig& cfg) {
  check_format(cfg, {"table", "json"});
  if (cfg.samples < 0) throw DomainError("--samples must be non-negative");
  auto d = build_ladder(cfg.lambda);
  auto faces = select_faces(cfg, d, true);
  std::vector<VerificationReport> reports(faces.size());
  parallel_for(faces.size(), cfg.jobs, [&](std::size_t i) {
    reports[i] = verify_face(faces[i], cfg.samples, cfg.seed + i, std::max(cfg.tol, 1e-8));
  });
  int failed = 0;
  for (const auto& r : reports) failed += !r.pass();
  Result res;
  res.code = failed ? kCheckFailed : kOk;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(verification_json(r));
    Json doc = {{"lambda", lambda_json(cfg.lambda)}, {"samples", cfg.samples}, {"seed", cfg.seed},
                {"results", arr},  {"failed", failed},  {"pass", failed == 0}};
    res.text = doc.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << header(cfg.lambda);
  os << std::left << std::setw(18) << "id" << std::setw(5) << "dim" << std::setw(6) << "pass" << std::setw(10)
     << "samples" << std::setw(8) << "fiber" << "max error\n";
  for (const auto& r : reports) {
    std::ostringstream err;
    err << std::scientific << std::setprecision(2) << std::max(r.max_gc_error, r.max_spectrum_error);
    os << std::setw(18) << r.face_id << std::setw(5) << r.face_dim << std::setw(6) << (r.pass() ? "yes" : "NO")
       << std::setw(10) << (std::to_string(r.samples_ok) + "/" + std::to_string(r.samples)) << std::setw(8)
       << (std::to_string(r.empirical_dim) + "=" + std::to_string(r.combinatorial_dim)) << err.str() << '\n';
    for (const auto& f : r.failures) os << "    " << f << '\n';
  }
  os << "verified " << reports.size() << " faces: " << (failed ? std::to_string(failed) + " failed" : "all pass")
     << '\n';
  res.text = os.str();
  return res;
}

inline Result cmd_render(const RunConfig& cfg) {
  check_format(cfg, {"ascii", "svg"});
  auto d = build_ladder(cfg.lambda);
  auto faces = select_faces(cfg, d, false);
  if (faces.size() != 1) throw DomainError("render draws a single face");
  RenderOptions opt;
  if (!cfg.overlay.empty()) {
    if (cfg.overlay.size() < 2 || (cfg.overlay[0] != 'w' && cfg.overlay[0] != 'W'))
      throw DomainError("--overlay expects wK, e.g. w2");
    try {
      opt.overlay = std::stoi(cfg.overlay.substr(1));
    } catch (const std::exception&) {
      throw DomainError("--overlay expects wK, e.g. w2");
    }
    check_stage(*d, *opt.overlay);
  }
  return {cfg.format == "svg" ? render_svg(faces[0], opt) : render_ascii(faces[0], opt)};
}

inline Result cmd_polytope(const RunConfig& cfg) {
  check_format(cfg, {"table", "json"});
  auto h = h_representation(cfg.lambda);
  if (cfg.format == "json") {
    Json doc = {{"lambda", lambda_json(cfg.lambda)}, {"dim", complex_dimension(cfg.lambda)}};
    doc.update(h_representation_json(h));
    return {doc.dump(2) + "\n"};
  }
  std::ostringstream os;
  os << header(cfg.lambda);
  os << "variables: " << h.variables.size() << ", inequalities: " << h.rows.size() << "  (coeffs . u <= rhs)\n";
  for (const auto& row : h.rows) {
    std::string lhs;
    for (std::size_t v = 0; v < h.variables.size(); ++v) {
      const auto& c = row.coeffs[v];
      if (c == Scalar(0)) continue;
      bool neg = c < Scalar(0);
      lhs += lhs.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
      Scalar mag = neg ? -c : c;
      if (mag != Scalar(1)) lhs += mag.str() + "*";
      lhs += point_key(h.variables[v]);
    }
    os << "  " << lhs << " <= " << row.rhs << '\n';
  }
  return {os.str()};
}

inline Result dispatch(const RunConfig& cfg) {
  if (cfg.command == "faces") return cmd_faces(cfg);
  if (cfg.command == "lagrangian") return cmd_lagrangian(cfg);
  if (cfg.command == "fiber") return cmd_fiber(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "render") return cmd_render(cfg);
  if (cfg.command == "polytope") return cmd_polytope(cfg);
  throw DomainError("unknown command '" + cfg.command + "'");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gelfand-Cetlin fibers of partial flag manifolds from ladder diagrams"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--lambda", cfg.lambda_text, "spectrum, e.g. 3,2,1,0 or 7/2,1,-1 (use --lambda=... if it starts with '-')")
      ->required();
  app.add_option("--format", cfg.format, "table | json (render: ascii | svg)");
  app.add_option("--out", cfg.out, "write output to this path instead of stdout");
  app.add_option("--seed", cfg.seed, "random seed for fiber sampling")->capture_default_str();
  app.add_option("--tol", cfg.tol, "float tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--face", cfg.face, "face id (or unique prefix), 'all' or 'improper'");
  app.add_option("--face-by-equalities", cfg.face_equalities, "face cut out by equalities, e.g. \"u11=u12,u13=4\"");
  app.add_option("--point", cfg.point, "face containing a GC point, e.g. \"u11=0,u12=1/2,u21=-1/2\"");
  app.add_option("--samples", cfg.samples, "fiber samples per face (verify)")->capture_default_str();
  app.add_option("--overlay", cfg.overlay, "draw the W_k regions of stage k (render), e.g. w2");

  struct Cmd {
    const char* name;
    const char* help;
  };
  for (Cmd c : {Cmd{"faces", "list all faces with dimensions and equality sets"},
                Cmd{"lagrangian", "list the Lagrangian faces and their rigid L-blocks"},
                Cmd{"fiber", "stage fibers, bundle structure and torus factorization"},
                Cmd{"verify", "cross-check fibers against sampled Hermitian matrices"},
                Cmd{"render", "draw a face over its ladder diagram"},
                Cmd{"polytope", "export the H-representation of the GC polytope"}}) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->callback([&cfg, name = std::string(c.name)] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.lambda = parse_lambda(cfg.lambda_text);
    if (cfg.format.empty()) cfg.format = cfg.command == "render" ? "ascii" : "table";
    Result res = dispatch(cfg);
    if (cfg.out.empty()) {
      out << res.text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw std::ios_base::failure("cannot open '" + cfg.out + "' for writing");
      file << res.text;
      if (!file) throw std::ios_base::failure("write to '" + cfg.out + "' failed");
    }
    return res.code;
  } catch (const InconsistencyError& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInternal;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace gcf::cli
