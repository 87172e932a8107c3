#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "unilab/cli.hpp"
#include "unilab/errors.hpp"

namespace unilab::cli {

using nlohmann::json;

std::string to_string(const Diagnostic& d) {
  std::string out = (d.path.empty() ? std::string("/") : d.path) + ": " + d.message;
  if (d.offset) out += " (offset " + std::to_string(*d.offset) + ")";
  return out;
}

namespace {

const std::set<std::string> kTasks{"measure", "foliate", "squares", "misalign", "infinitesimal"};
const std::set<std::string> kTopKeys{"schema",  "description", "domain",   "composite",
                                     "tolerances", "points",   "tasks",    "foliate",
                                     "squares", "misalign",    "infinitesimal"};

std::string fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

class Reader {
 public:
  explicit Reader(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

  std::vector<Diagnostic> diags;

  void error(const std::string& path, const std::string& message,
             std::optional<std::size_t> offset = std::nullopt) {
    diags.push_back({path, message, offset});
  }

  const json* member(const json& obj, const std::string& path, const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(child(path, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    error(path, "expected an object");
    return false;
  }

  bool array(const json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
    if (!j.is_array()) {
      error(path, "expected an array");
      return false;
    }
    if (size && j.size() != *size) {
      error(path, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
      return false;
    }
    return true;
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      error(path, "expected a number");
      return std::nullopt;
    }
    return j.get<double>();
  }

  std::optional<double> positive(const json& j, const std::string& path) {
    const auto v = number(j, path);
    if (v && !(*v > 0.0)) {
      error(path, "must be positive");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      error(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<Vec3> vec3(const json& j, const std::string& path) {
    if (!array(j, path, 3)) return std::nullopt;
    Vec3 v;
    bool ok = true;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto d = number(j[i], child(path, i));
      if (d) v[i] = *d; else ok = false;
    }
    return ok ? std::optional<Vec3>(v) : std::nullopt;
  }

  std::optional<ScalarExpr> expr(const json& j, const std::string& path) {
    if (j.is_number()) return unilab::number(j.get<double>());
    if (!j.is_string()) {
      error(path, "expected an expression string or a number");
      return std::nullopt;
    }
    try {
      return parse(j.get<std::string>());
    } catch (const SyntaxError& e) {
      error(path, e.what(), e.offset());
    } catch (const UnknownIdentifier& e) {
      error(path, e.what(), e.offset());
    }
    return std::nullopt;
  }

  template <std::size_t N>
  std::optional<std::array<ScalarExpr, N>> exprs(const json& j, const std::string& path) {
    if (!array(j, path, N)) return std::nullopt;
    std::array<ScalarExpr, N> out;
    bool ok = true;
    for (std::size_t i = 0; i < N; ++i) {
      auto e = expr(j[i], child(path, i));
      if (e) out[i] = *e; else ok = false;
    }
    return ok ? std::optional<std::array<ScalarExpr, N>>(out) : std::nullopt;
  }

  std::optional<GridField> grid(const json& j, const std::string& path, std::size_t components) {
    const auto rel = string(j, path);
    if (!rel) return std::nullopt;
    const std::filesystem::path file = base_dir_ / *rel;
    std::ifstream in(file);
    if (!in) {
      error(path, "cannot open grid file '" + file.string() + "'");
      return std::nullopt;
    }
    json g;
    try {
      in >> g;
      const Vec3 lo{g.at("lower")[0].get<double>(), g.at("lower")[1].get<double>(), g.at("lower")[2].get<double>()};
      const Vec3 hi{g.at("upper")[0].get<double>(), g.at("upper")[1].get<double>(), g.at("upper")[2].get<double>()};
      const std::array<int, 3> shape = g.at("shape").get<std::array<int, 3>>();
      std::vector<double> values;
      for (const json& node : g.at("samples"))
        for (const json& v : node) values.push_back(v.get<double>());
      return GridField(lo, hi, shape, components, std::move(values));
    } catch (const std::exception& e) {
      error(path, "invalid grid file '" + file.string() + "': " + e.what());
    }
    return std::nullopt;
  }

  std::optional<FrameField> frame(const json& j, const std::string& path) {
    if (!object(j, path)) return std::nullopt;
    const bool has_frame = j.contains("frame"), has_grid = j.contains("grid");
    if (has_frame == has_grid) {
      error(path, "give exactly one of 'frame' or 'grid'");
      return std::nullopt;
    }
    if (has_frame) {
      const auto e = exprs<9>(j["frame"], child(path, "frame"));
      if (e) return FrameField::analytic(*e);
      return std::nullopt;
    }
    auto g = grid(j["grid"], child(path, "grid"), 9);
    if (g) return FrameField::sampled(std::move(*g));
    return std::nullopt;
  }

  std::optional<DirectorField> director(const json& j, const std::string& path) {
    if (j.is_array()) {
      const auto e = exprs<3>(j, path);
      if (e) return DirectorField::analytic(*e);
      return std::nullopt;
    }
    if (j.is_object() && j.contains("grid")) {
      auto g = grid(j["grid"], child(path, "grid"), 3);
      if (g) return DirectorField::sampled(std::move(*g));
      return std::nullopt;
    }
    error(path, "expected three expressions or {\"grid\": file}");
    return std::nullopt;
  }

 private:
  std::filesystem::path base_dir_;
};

void read_domain(Reader& r, const json& j, AnalysisConfig& c) {
  const std::string path = "/domain";
  if (!r.object(j, path)) return;
  const json* lo = r.member(j, path, "lower", true);
  const json* hi = r.member(j, path, "upper", true);
  const json* res = r.member(j, path, "resolution", true);
  if (lo) if (auto v = r.vec3(*lo, child(path, "lower"))) c.domain.lower = *v;
  if (hi) if (auto v = r.vec3(*hi, child(path, "upper"))) c.domain.upper = *v;
  if (res && r.array(*res, child(path, "resolution"), 3)) {
    for (std::size_t i = 0; i < 3; ++i) {
      const json& n = (*res)[i];
      if (!n.is_number_integer() || n.get<long long>() < 2 || n.get<long long>() > 1000)
        r.error(child(child(path, "resolution"), i), "expected an integer in [2, 1000]");
      else
        c.domain.resolution[i] = n.get<int>();
    }
  }
  for (std::size_t i = 0; i < 3; ++i)
    if (!(c.domain.upper[i] > c.domain.lower[i])) {
      r.error(path, "upper must exceed lower on every axis");
      break;
    }
}

void read_composite(Reader& r, const json& j, AnalysisConfig& c) {
  const std::string path = "/composite";
  if (!r.object(j, path)) return;
  SymmetryCase sc = SymmetryCase::DiscreteDiscrete;
  bool ok = true;
  if (const json* s = r.member(j, path, "symmetry_case", false)) {
    if (auto name = r.string(*s, child(path, "symmetry_case"))) {
      try {
        sc = parse_symmetry_case(*name);
      } catch (const std::invalid_argument& e) {
        r.error(child(path, "symmetry_case"), e.what());
        ok = false;
      }
    } else {
      ok = false;
    }
  }
  std::optional<FrameField> f1, f2;
  if (const json* m = r.member(j, path, "component1", true)) f1 = r.frame(*m, child(path, "component1"));
  if (const json* m = r.member(j, path, "component2", true)) f2 = r.frame(*m, child(path, "component2"));
  std::optional<DirectorField> n, n1, n2;
  if (const json* m = r.member(j, path, "director", false)) {
    n = r.director(*m, child(path, "director"));
    ok &= n.has_value();
  }
  if (const json* m = r.member(j, path, "director1", false)) {
    n1 = r.director(*m, child(path, "director1"));
    ok &= n1.has_value();
  }
  if (const json* m = r.member(j, path, "director2", false)) {
    n2 = r.director(*m, child(path, "director2"));
    ok &= n2.has_value();
  }
  for (const auto& [key, value] : j.items())
    if (key != "symmetry_case" && key != "component1" && key != "component2" && key != "director" &&
        key != "director1" && key != "director2")
      r.error(child(path, key), "unknown field");
  if (!ok || !f1 || !f2) return;

  CompositeSpec spec{*f1, *f2, sc, n, n1, n2};
  try {
    spec.validate();
  } catch (const std::exception& e) {
    r.error(path, e.what());
    return;
  }
  c.composite = std::move(spec);
}

void read_tolerances(Reader& r, const json& j, AnalysisConfig& c) {
  const std::string path = "/tolerances";
  if (!r.object(j, path)) return;
  for (const auto& [key, value] : j.items()) {
    double* slot = key == "rank_rel_tol"      ? &c.tolerances.rank_rel_tol
                   : key == "commutation_tol" ? &c.tolerances.commutation_tol
                   : key == "group_tol"       ? &c.tolerances.group_tol
                                              : nullptr;
    if (!slot) {
      r.error(child(path, key), "unknown tolerance");
      continue;
    }
    if (auto v = r.positive(value, child(path, key))) *slot = *v;
  }
}

void read_points(Reader& r, const json& j, AnalysisConfig& c) {
  const std::string path = "/points";
  if (!r.array(j, path)) return;
  std::vector<Point> pts;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(path, i);
    if (!r.object(j[i], p)) continue;
    const json* id = r.member(j[i], p, "id", true);
    const json* x = r.member(j[i], p, "x", true);
    std::optional<std::string> name;
    std::optional<Vec3> coords;
    if (id) name = r.string(*id, child(p, "id"));
    if (x) coords = r.vec3(*x, child(p, "x"));
    if (!name || !coords) continue;
    if (!seen.insert(*name).second) {
      r.error(child(p, "id"), "duplicate point id '" + *name + "'");
      continue;
    }
    pts.push_back({{*name}, *coords});
  }
  c.points = PointSet(std::move(pts));
}

std::optional<PointId> point_ref(Reader& r, const AnalysisConfig& c, const json& j, const std::string& path) {
  const auto name = r.string(j, path);
  if (!name) return std::nullopt;
  if (!c.points.contains({*name})) {
    r.error(path, "dangling reference to unknown point id '" + *name + "'");
    return std::nullopt;
  }
  return PointId{*name};
}

std::optional<PointPair> pair_ref(Reader& r, const AnalysisConfig& c, const json& j, const std::string& path) {
  if (!r.array(j, path, 2)) return std::nullopt;
  auto a = point_ref(r, c, j[0], child(path, 0));
  auto b = point_ref(r, c, j[1], child(path, 1));
  if (!a || !b) return std::nullopt;
  return PointPair{*a, *b};
}

void read_task_options(Reader& r, const json& root, AnalysisConfig& c) {
  auto known = [&](const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : j.items()) {
      bool ok = false;
      for (const char* k : keys) ok |= key == k;
      if (!ok) r.error(child(path, key), "unknown field");
    }
  };

  if (const json* f = r.member(root, "", "foliate", false); f && r.object(*f, "/foliate")) {
    known(*f, "/foliate", {"kernel_fields"});
    if (const json* kf = r.member(*f, "/foliate", "kernel_fields", false);
        kf && r.object(*kf, "/foliate/kernel_fields")) {
      const json* v = r.member(*kf, "/foliate/kernel_fields", "v", true);
      const json* w = r.member(*kf, "/foliate/kernel_fields", "w", true);
      std::optional<VectorExpr> ve, we;
      if (v) ve = r.exprs<3>(*v, "/foliate/kernel_fields/v");
      if (w) we = r.exprs<3>(*w, "/foliate/kernel_fields/w");
      if (ve && we) c.kernel_fields = std::make_pair(*ve, *we);
    }
  }

  if (const json* s = r.member(root, "", "squares", false); s && r.object(*s, "/squares")) {
    known(*s, "/squares", {"list"});
    if (const json* list = r.member(*s, "/squares", "list", false); list && r.array(*list, "/squares/list")) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        const std::string p = child("/squares/list", i);
        const json& e = (*list)[i];
        if (!r.object(e, p)) continue;
        known(e, p, {"w", "x", "y", "z"});
        std::array<std::optional<PointId>, 4> ids;
        const char* keys[] = {"w", "x", "y", "z"};
        for (std::size_t k = 0; k < 4; ++k)
          if (const json* m = r.member(e, p, keys[k], true)) ids[k] = point_ref(r, c, *m, child(p, keys[k]));
        if (ids[0] && ids[1] && ids[2] && ids[3]) c.squares.push_back({*ids[0], *ids[1], *ids[2], *ids[3]});
      }
    }
  }

  if (const json* m = r.member(root, "", "misalign", false); m && r.object(*m, "/misalign")) {
    known(*m, "/misalign", {"pairs", "compatibility"});
    if (const json* pairs = r.member(*m, "/misalign", "pairs", false); pairs && r.array(*pairs, "/misalign/pairs"))
      for (std::size_t i = 0; i < pairs->size(); ++i)
        if (auto p = pair_ref(r, c, (*pairs)[i], child("/misalign/pairs", i))) c.pairs.push_back(*p);
    if (const json* comp = r.member(*m, "/misalign", "compatibility", false);
        comp && r.array(*comp, "/misalign/compatibility")) {
      for (std::size_t i = 0; i < comp->size(); ++i) {
        const std::string p = child("/misalign/compatibility", i);
        const json& e = (*comp)[i];
        if (!r.object(e, p)) continue;
        known(e, p, {"pair1", "pair2"});
        std::optional<PointPair> a, b;
        if (const json* x = r.member(e, p, "pair1", true)) a = pair_ref(r, c, *x, child(p, "pair1"));
        if (const json* x = r.member(e, p, "pair2", true)) b = pair_ref(r, c, *x, child(p, "pair2"));
        if (a && b) c.compatibility.push_back({*a, *b});
      }
    }
  }

  if (const json* inf = r.member(root, "", "infinitesimal", false); inf && r.object(*inf, "/infinitesimal")) {
    known(*inf, "/infinitesimal", {"at", "displacements", "project_skew"});
    if (const json* at = r.member(*inf, "/infinitesimal", "at", false); at && r.array(*at, "/infinitesimal/at"))
      for (std::size_t i = 0; i < at->size(); ++i)
        if (auto p = point_ref(r, c, (*at)[i], child("/infinitesimal/at", i))) c.infinitesimal_at.push_back(*p);
    if (const json* d = r.member(*inf, "/infinitesimal", "displacements", false);
        d && r.array(*d, "/infinitesimal/displacements")) {
      for (std::size_t i = 0; i < d->size(); ++i) {
        const std::string p = child("/infinitesimal/displacements", i);
        const json& e = (*d)[i];
        if (!r.object(e, p)) continue;
        known(e, p, {"dx", "dy", "dz"});
        std::optional<Vec3> dx, dy, dz;
        if (const json* x = r.member(e, p, "dx", true)) dx = r.vec3(*x, child(p, "dx"));
        if (const json* x = r.member(e, p, "dy", true)) dy = r.vec3(*x, child(p, "dy"));
        if (const json* x = r.member(e, p, "dz", true)) dz = r.vec3(*x, child(p, "dz"));
        if (dx && dy && dz) c.displacements.push_back({*dx, *dy, *dz});
      }
    }
    if (const json* ps = r.member(*inf, "/infinitesimal", "project_skew", false)) {
      if (ps->is_boolean()) c.project_skew = ps->get<bool>();
      else r.error("/infinitesimal/project_skew", "expected a boolean");
    }
  }
}

}  // namespace

LoadResult load_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  Reader r(base_dir);
  LoadResult out;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    out.diagnostics.push_back({"", std::string("malformed JSON: ") + e.what(), e.byte});
    return out;
  }
  if (!r.object(root, "")) {
    out.diagnostics = std::move(r.diags);
    return out;
  }

  AnalysisConfig c;
  c.source_hash = fnv1a64(text);

  for (const auto& [key, value] : root.items())
    if (!kTopKeys.count(key)) r.error("/" + key, "unknown field");

  if (const json* s = r.member(root, "", "schema", true)) {
    if (!s->is_number_integer() || s->get<long long>() != kSchemaVersion)
      r.error("/schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (const json* d = r.member(root, "", "domain", true)) read_domain(r, *d, c);
  if (const json* comp = r.member(root, "", "composite", true)) read_composite(r, *comp, c);
  if (const json* t = r.member(root, "", "tolerances", false)) read_tolerances(r, *t, c);
  if (const json* p = r.member(root, "", "points", false)) read_points(r, *p, c);

  if (const json* t = r.member(root, "", "tasks", true); t && r.array(*t, "/tasks")) {
    if (t->empty()) r.error("/tasks", "no tasks requested");
    for (std::size_t i = 0; i < t->size(); ++i) {
      const auto name = r.string((*t)[i], child("/tasks", i));
      if (!name) continue;
      if (!kTasks.count(*name)) {
        r.error(child("/tasks", i), "unknown task '" + *name + "'");
        continue;
      }
      if (std::find(c.tasks.begin(), c.tasks.end(), *name) == c.tasks.end()) c.tasks.push_back(*name);
    }
  }
  for (const char* needs_points : {"squares", "misalign"})
    if (std::find(c.tasks.begin(), c.tasks.end(), needs_points) != c.tasks.end() && c.points.size() == 0)
      r.error("/points", std::string("task '") + needs_points + "' needs at least one point");

  read_task_options(r, root, c);

  out.diagnostics = std::move(r.diags);
  if (out.diagnostics.empty()) out.config = std::move(c);
  return out;
}

LoadResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {std::nullopt, {{"", "cannot read config file '" + path.string() + "'", std::nullopt}}};
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path.parent_path());
}

std::vector<Diagnostic> validate(const std::filesystem::path& path) { return load_config(path).diagnostics; }

}  // namespace unilab::cli
