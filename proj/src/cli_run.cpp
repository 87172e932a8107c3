#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "unilab/algebroid.hpp"
#include "unilab/cli.hpp"
#include "unilab/errors.hpp"
#include "unilab/geometry.hpp"

namespace unilab::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

void write(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        write(value, out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

json mat(const Mat3& m) {
  json a = json::array();
  for (double v : m.e) a.push_back(v);
  return a;
}

json vec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json basis(const std::vector<Vec3>& b) {
  json a = json::array();
  for (const Vec3& v : b) a.push_back(vec(v));
  return a;
}

json pair_json(const PointPair& p) { return json::array({p.first.name, p.second.name}); }

struct Stat {
  double max = 0.0, sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    max = std::max(max, v);
    sum += v;
    ++n;
  }
  json to_json() const { return {{"max", max}, {"mean", n ? sum / static_cast<double>(n) : 0.0}}; }
};

bool has_task(const AnalysisConfig& c, const char* name) {
  return std::find(c.tasks.begin(), c.tasks.end(), name) != c.tasks.end();
}

/// Rotation angle in degrees when m is a proper rotation.
std::optional<double> rotation_degrees(const Mat3& m) {
  if (max_abs_diff(transpose(m) * m, Mat3::identity()) > 1e-9 || det(m) < 0.0) return std::nullopt;
  const Vec3 axial{m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
  return std::atan2(0.5 * norm(axial), 0.5 * (trace(m) - 1.0)) * 180.0 / std::numbers::pi;
}

json task_measure(const AnalysisConfig& c) {
  const CompositeSpec& spec = *c.composite;
  const std::vector<Vec3> nodes = c.domain.lattice();
  json out{{"symmetry_case", std::string(to_string(spec.symmetry_case))}, {"nodes", nodes.size()}};
  Stat a, b;
  for (const Vec3& x : nodes) {
    const MeasureResult r = measure(spec, x);
    if (const auto* t = std::get_if<Ten3>(&r)) {
      a.add(max_abs(*t));
    } else if (const auto* g = std::get_if<Mat3>(&r)) {
      a.add(max_abs(*g));
    } else if (const auto* d = std::get_if<DirectorMeasure>(&r)) {
      a.add(max_abs(d->metric_defect));
      b.add(max_abs(d->director_gradient));
    } else if (const auto* q = std::get_if<AngleMeasure>(&r)) {
      a.add(max_abs(q->metric_defect));
      b.add(std::abs(q->angle_defect));
    }
  }
  switch (spec.symmetry_case) {
    case SymmetryCase::DiscreteDiscrete: {
      out["B"] = a.to_json();
      const FoliationReport rep = scan_domain(spec, c.domain, c.tolerances.rank_rel_tol);
      out["class"] = std::string(to_string(rep.classification));
      break;
    }
    case SymmetryCase::DiscreteIsotropic:
    case SymmetryCase::IsoIso: out["metric_defect"] = a.to_json(); break;
    case SymmetryCase::DiscreteTransIso:
      out["metric_defect"] = a.to_json();
      out["director_gradient"] = b.to_json();
      break;
    case SymmetryCase::TransIsoTransIso:
      out["metric_defect"] = a.to_json();
      out["angle_defect"] = b.to_json();
      break;
  }
  return out;
}

FoliationReport foliation_scan(const AnalysisConfig& c) {
  if (c.kernel_fields)
    return scan_domain(*c.composite, c.domain, c.tolerances.rank_rel_tol, c.kernel_fields->first,
                       c.kernel_fields->second);
  return scan_domain(*c.composite, c.domain, c.tolerances.rank_rel_tol);
}

json task_foliate(const AnalysisConfig& c) {
  const FoliationReport rep = foliation_scan(c);
  Stat smin;
  for (const DistributionSample& s : rep.samples) smin.add(s.sigma_min);
  json hist = json::array();
  for (std::size_t n : rep.m_histogram) hist.push_back(n);
  json failures = json::array();
  for (const NodeFailure& f : rep.failures) failures.push_back({{"point", vec(f.point)}, {"message", f.message}});
  json out{{"class", std::string(to_string(rep.classification))},
           {"m_histogram", hist},
           {"nodes", rep.samples.size() + rep.failures.size()},
           {"failures", failures},
           {"sigma_min", smin.to_json()}};
  if (c.kernel_fields) out["involutivity_max_residual"] = rep.involutivity_max_residual;
  return out;
}

MaterialDoubleGroupoid build_double_groupoid(const AnalysisConfig& c) {
  const CompositeSpec& spec = *c.composite;
  FiniteGroupoid h = from_frame_field(spec.component1, c.points);
  FiniteGroupoid v = from_frame_field(spec.component2, c.points);
  h = FiniteGroupoid(h.base(), h.arrows(), c.tolerances.group_tol);
  v = FiniteGroupoid(v.base(), v.arrows(), c.tolerances.group_tol);
  return MaterialDoubleGroupoid::generate(std::move(h), std::move(v), c.tolerances.commutation_tol);
}

json task_squares(const AnalysisConfig& c) {
  const MaterialDoubleGroupoid dg = build_double_groupoid(c);
  const CoreGroupoid cg = core(dg);
  const double tol = c.tolerances.commutation_tol;
  json out{{"coarse_squares", coarse_enumerate(dg.side_h(), dg.side_v()).size()},
           {"material_squares", dg.squares().size()},
           {"unfilled_pairs", filling_check(dg).size()},
           {"core_arrows", cg.arrows.size()},
           {"is_uniform", is_uniform(dg)}};

  json listed = json::array();
  bool all_commutative = true;
  for (const SquareRef& ref : c.squares) {
    const Square sq{ref.w,
                    ref.x,
                    ref.y,
                    ref.z,
                    dg.side_h().unique_arrow(ref.w, ref.y),
                    dg.side_h().unique_arrow(ref.x, ref.z),
                    dg.side_v().unique_arrow(ref.w, ref.x),
                    dg.side_v().unique_arrow(ref.y, ref.z)};
    const bool comm = is_commutative(sq, tol);
    all_commutative &= comm;
    json e{{"corners", {{"w", ref.w.name}, {"x", ref.x.name}, {"y", ref.y.name}, {"z", ref.z.name}}},
           {"commutative", comm},
           {"commutation_defect", commutation_defect(sq)}};

    json states = json::object();
    for (const PointId& p : {ref.x, ref.y, ref.z}) {
      const Mat3 m = dg.side_v().unique_arrow(ref.w, p).map;
      json s{{"map", mat(m)}};
      if (const auto deg = rotation_degrees(m)) s["rotation_deg"] = *deg;
      states[p.name] = s;
    }
    e["component2_states"] = states;

    const Mat3 m_wx = misalignment(dg, ref.w, ref.x), m_yz = misalignment(dg, ref.y, ref.z);
    const Mat3 m_wy = misalignment(dg, ref.w, ref.y), m_xz = misalignment(dg, ref.x, ref.z);
    const PointPair wx{ref.w, ref.x}, yz{ref.y, ref.z}, wy{ref.w, ref.y}, xz{ref.x, ref.z};
    e["opposite_pairs"] = {
        {"wx_yz",
         {{"compatible_1", is_compatible(dg, wx, yz, 1)},
          {"compatible_2", is_compatible(dg, wx, yz, 2)},
          {"misalignments_equal", max_abs_diff(m_wx, m_yz) <= tol * (1.0 + max_abs(m_wx))}}},
        {"wy_xz",
         {{"compatible_1", is_compatible(dg, wy, xz, 1)},
          {"compatible_2", is_compatible(dg, wy, xz, 2)},
          {"misalignments_equal", max_abs_diff(m_wy, m_xz) <= tol * (1.0 + max_abs(m_wy))}}}};

    if (comm) {
      const ComplementaryResult r = complementary_square(dg, sq);
      e["complementary"] = {{"commutative", r.commutative},
                            {"p_equals_q", r.p_equals_q},
                            {"intertwining_residual", r.intertwining_residual},
                            {"condition_residuals", json::array({r.condition1, r.condition2, r.condition3})}};
    }
    listed.push_back(e);
  }
  out["listed"] = listed;
  out["all_listed_commutative"] = all_commutative;
  return out;
}

json task_misalign(const AnalysisConfig& c) {
  const MaterialDoubleGroupoid dg = build_double_groupoid(c);
  std::vector<PointPair> pairs = c.pairs;
  if (pairs.empty())
    for (const Point& a : c.points.points())
      for (const Point& b : c.points.points())
        if (!(a.id == b.id)) pairs.push_back({a.id, b.id});

  json ms = json::array();
  for (const PointPair& p : pairs) {
    const Mat3 m = misalignment(dg, p.first, p.second);
    ms.push_back({{"pair", pair_json(p)}, {"m", mat(m)}, {"deviation", max_abs_diff(m, Mat3::identity())}});
  }
  json comp = json::array();
  for (const CompatibilityQuery& q : c.compatibility) {
    json e{{"pair1", pair_json(q.pair1)},
           {"pair2", pair_json(q.pair2)},
           {"compatible_1", is_compatible(dg, q.pair1, q.pair2, 1)},
           {"compatible_2", is_compatible(dg, q.pair1, q.pair2, 2)}};
    try {
      e["normalizer"] = normalizer_criterion(dg, q.pair1, q.pair2);
    } catch (const NotOneCompatible& err) {
      e["normalizer"] = nullptr;
      e["normalizer_note"] = err.what();
    }
    comp.push_back(e);
  }
  return {{"misalignments", ms}, {"compatibility", comp}};
}

json task_infinitesimal(const AnalysisConfig& c) {
  const CompositeSpec& spec = *c.composite;
  std::vector<std::pair<std::string, Vec3>> at;
  for (const PointId& id : c.infinitesimal_at) at.emplace_back(id.name, c.points.coordinates(id));
  if (at.empty())
    for (const Point& p : c.points.points()) at.emplace_back(p.id.name, p.coordinates);
  if (at.empty()) at.emplace_back("center", 0.5 * (c.domain.lower + c.domain.upper));

  const AlgebroidOptions opt{c.project_skew};
  json out = json::array();
  for (const auto& [name, x] : at) {
    const InfinitesimalClassification k = infinitesimal_classification(spec, x, c.tolerances.rank_rel_tol, opt);
    json e{{"point", name},
           {"x", vec(x)},
           {"kind", std::string(to_string(k.kind))},
           {"m", k.m},
           {"basis", basis(k.basis)},
           {"sigma_max", k.sigma_max},
           {"sigma_min", k.sigma_min}};
    const DistributionSample fs = null_space_at(spec, x, c.tolerances.rank_rel_tol);
    e["foliation_m"] = fs.m;
    if (fs.m == k.m) e["kernel_angle"] = max_principal_angle(fs.basis, k.basis);
    else e["kernel_angle"] = nullptr;

    json res = json::array();
    for (const Displacement& d : c.displacements) {
      const CommutationResidual r = commutation_residual(spec, x, d.dx, d.dy, d.dz, opt);
      res.push_back({{"dx", vec(d.dx)},
                     {"dy", vec(d.dy)},
                     {"dz", vec(d.dz)},
                     {"residual", mat(r.residual)},
                     {"max_abs", max_abs(r.residual)}});
    }
    e["residuals"] = res;
    out.push_back(e);
  }
  return {{"points", out}};
}

}  // namespace

std::string dump_deterministic(const json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

json run_tasks(const AnalysisConfig& config, bool& failed) {
  failed = false;
  json tasks = json::object();
  const std::pair<const char*, json (*)(const AnalysisConfig&)> runners[] = {
      {"measure", task_measure},   {"foliate", task_foliate},         {"squares", task_squares},
      {"misalign", task_misalign}, {"infinitesimal", task_infinitesimal}};
  for (const auto& [name, fn] : runners) {
    if (!has_task(config, name)) continue;
    try {
      json r = fn(config);
      r["status"] = "ok";
      tasks[name] = std::move(r);
    } catch (const std::exception& e) {
      failed = true;
      tasks[name] = {{"status", "error"}, {"error", e.what()}};
    }
  }
  return {{"provenance",
           {{"config_hash", config.source_hash}, {"schema", kSchemaVersion}, {"tool_version", kToolVersion}}},
          {"tasks", tasks}};
}

std::string foliation_csv(const FoliationReport& report) {
  std::string out = "x1,x2,x3,m,sigma_min\n";
  for (const DistributionSample& s : report.samples) {
    out += fmt(s.point[0]) + "," + fmt(s.point[1]) + "," + fmt(s.point[2]) + "," + std::to_string(s.m) + "," +
           fmt(s.sigma_min) + "\n";
  }
  return out;
}

int run(const std::filesystem::path& config_path, const std::filesystem::path& out_path, Format format,
        std::ostream& err) {
  const LoadResult loaded = load_config(config_path);
  if (!loaded.config) {
    for (const Diagnostic& d : loaded.diagnostics) err << to_string(d) << "\n";
    return kExitInvalid;
  }
  const AnalysisConfig& config = *loaded.config;

  std::string payload;
  bool failed = false;
  if (format == Format::Csv) {
    if (!has_task(config, "foliate")) {
      err << "csv output needs the 'foliate' task\n";
      return kExitInvalid;
    }
    try {
      payload = foliation_csv(foliation_scan(config));
    } catch (const std::exception& e) {
      err << "foliate: " << e.what() << "\n";
      return kExitNumerical;
    }
  } else {
    const json report = run_tasks(config, failed);
    payload = dump_deterministic(report);
    if (failed)
      for (const auto& [name, r] : report["tasks"].items())
        if (r["status"] == "error") err << name << ": " << r["error"].get<std::string>() << "\n";
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << payload)) {
    err << "cannot write '" << out_path.string() << "'\n";
    return kExitInvalid;
  }
  return failed ? kExitNumerical : kExitOk;
}

int validate_command(const std::filesystem::path& config_path, std::ostream& out) {
  const std::vector<Diagnostic> diags = validate(config_path);
  for (const Diagnostic& d : diags) out << to_string(d) << "\n";
  return diags.empty() ? kExitOk : kExitInvalid;
}

}  // namespace unilab::cli
