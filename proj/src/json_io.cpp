#include "thetalift/json_io.hpp"

namespace tl {

namespace {

json cplx_row(long n, const Cplx& z, const PrecisionContext& ctx) {
  return json::array(
      {n, real_to_string(z.re, ctx), real_to_string(z.im, ctx)});
}

std::string rat_str(const Rat& q) { return q.str(); }

}  // namespace

json qexpansion_to_json(const QExpansion& f, long D,
                        const PrecisionContext& ctx) {
  json j;
  j["N"] = f.N;
  json coeffs = json::array();
  for (size_t n = 0; n < f.coeffs.size(); ++n) {
    coeffs.push_back(cplx_row(static_cast<long>(n), f.coeffs[n], ctx));
  }
  j["coeffs"] = std::move(coeffs);
  j["weight"] = rat_str(f.weight);
  j["disc"] = D;
  return j;
}

QExpansion qexpansion_from_json(const json& j) {
  QExpansion f;
  f.N = j.at("N").get<long>();
  f.weight = Rat(j.at("weight").get<std::string>());
  const json& coeffs = j.at("coeffs");
  long n_max = -1;
  for (const json& row : coeffs) {
    const long n = row.at(0).get<long>();
    if (n > n_max) n_max = n;
  }
  f.coeffs.assign(static_cast<size_t>(n_max + 1), Cplx{});
  for (const json& row : coeffs) {
    const long n = row.at(0).get<long>();
    f.coeffs[static_cast<size_t>(n)] =
        Cplx{Real(row.at(1).get<std::string>()),
             Real(row.at(2).get<std::string>())};
  }
  return f;
}

json vvform_to_json(const VectorValuedForm& F, long A,
                    const PrecisionContext& ctx) {
  json j;
  j["disc"] = F.D;
  j["A"] = A;
  j["weight"] = rat_str(F.weight);
  json comps = json::object();
  for (size_t r = 0; r < F.components.size(); ++r) {
    json rows = json::array();
    const QExpansion& c = F.components[r];
    for (size_t n = 0; n < c.coeffs.size(); ++n) {
      rows.push_back(cplx_row(static_cast<long>(n), c.coeffs[n], ctx));
    }
    comps[std::to_string(r)] = std::move(rows);
  }
  j["components"] = std::move(comps);
  return j;
}

VectorValuedForm vvform_from_json(const json& j) {
  VectorValuedForm F;
  F.D = j.at("disc").get<long>();
  F.weight = Rat(j.at("weight").get<std::string>());
  const long N = -F.D;
  F.components.assign(static_cast<size_t>(N), QExpansion{});
  const json& comps = j.at("components");
  for (long r = 0; r < N; ++r) {
    QExpansion& c = F.components[static_cast<size_t>(r)];
    c.N = N;
    c.weight = F.weight;
    const json& rows = comps.at(std::to_string(r));
    long n_max = -1;
    for (const json& row : rows) {
      const long n = row.at(0).get<long>();
      if (n > n_max) n_max = n;
    }
    c.coeffs.assign(static_cast<size_t>(n_max + 1), Cplx{});
    for (const json& row : rows) {
      const long n = row.at(0).get<long>();
      c.coeffs[static_cast<size_t>(n)] =
          Cplx{Real(row.at(1).get<std::string>()),
               Real(row.at(2).get<std::string>())};
    }
  }
  return F;
}

json classgroup_to_json(const ClassGroup& G, const PrecisionContext& ctx) {
  ctx.activate();
  const long h = G.h();
  json j;
  j["disc"] = G.disc().D;
  j["h"] = h;
  json classes = json::array();
  for (const QuadForm& f : G.classes()) {
    classes.push_back(json::array({f.a, f.b, f.c}));
  }
  j["classes"] = std::move(classes);
  j["cyclic_orders"] = G.invariant_factors();
  j["generators"] = G.generators();
  j["genus_count"] = G.genus_count();
  json comp = json::array();
  for (int i = 0; i < h; ++i) {
    json row = json::array();
    for (int k = 0; k < h; ++k) row.push_back(G.mul(i, k));
    comp.push_back(std::move(row));
  }
  j["composition"] = std::move(comp);
  const auto chars = characters(G);
  json chs = json::array();
  for (size_t i = 0; i < chars.size(); ++i) {
    json c;
    c["index"] = i;
    c["exponents"] = chars[i].exps;
    c["order"] = char_order(G, static_cast<int>(i));
    c["real"] = char_is_real(G, static_cast<int>(i));
    chs.push_back(std::move(c));
  }
  j["characters"] = std::move(chs);
  json cm = json::array();
  for (int i = 0; i < h; ++i) {
    const Cplx z = G.cm_point(i, ctx);
    cm.push_back(json::array(
        {real_to_string(z.re, ctx), real_to_string(z.im, ctx)}));
  }
  j["cm_points"] = std::move(cm);
  return j;
}

json petersson_to_json(int psi, int chi, const PeterssonValue& p,
                       const PrecisionContext& ctx) {
  json j;
  j["pair"] = json::array({psi, chi});
  j["method"] = p.method;
  j["value"] = json::array(
      {real_to_string(p.value.re, ctx), real_to_string(p.value.im, ctx)});
  j["error"] = real_to_string(p.error_estimate, ctx);
  j["evaluations"] = p.evaluations;
  return j;
}

json report_to_json(long D, const std::vector<CheckResult>& checks) {
  json j;
  j["disc"] = D;
  j["all_pass"] = all_pass(checks);
  json arr = json::array();
  for (const CheckResult& c : checks) {
    json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["skipped"] = c.skipped;
    e["details"] = c.details;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j;
}

std::string dump_json(const json& j, bool pretty) {
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace tl
