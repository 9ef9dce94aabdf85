#include "nlfi/report.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

namespace nlfi {

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Certificate& c) {
  json j;
  j["space"] = to_string(c.space);
  if (c.space == Space::lp) j["p"] = std::isinf(c.p) ? json("inf") : json(c.p);
  if (c.space == Space::calpha) j["alpha"] = c.alpha;
  j["constant"] = json_number(c.constant);
  j["verdict"] = c.contractive() ? "contractive" : "not-certified";
  j["raw_constant"] = json_number(c.raw_constant);
  j["safety_factor"] = c.safety_factor;
  j["combine"] = c.combine;
  j["strict_constant"] = c.strict_constant ? json_number(*c.strict_constant) : json(nullptr);
  json w = json::array();
  for (const auto& x : c.witnesses) {
    w.push_back({{"term", x.term}, {"piece", x.piece + 1}, {"x", json_number(x.x)}, {"value", json_number(x.value)}});
  }
  j["witnesses"] = std::move(w);
  json b = json::array();
  for (const auto& t : c.breakdown) {
    json e;
    e["piece"] = t.piece + 1;
    if (c.space == Space::calpha) {
      e["k"] = t.k;
      e["q"] = t.q;
      e["tuple"] = t.tuple;
      e["binom"] = t.binom;
      e["sigma"] = t.sigma;
      e["gamma_s"] = json_number(t.gamma_s);
      e["gamma_h"] = json_number(t.gamma_h);
      e["strict_only"] = t.strict_only;
    }
    e["contribution"] = json_number(t.contribution);
    b.push_back(std::move(e));
  }
  j["breakdown"] = std::move(b);
  json r = json::array();
  for (const auto& [n, v] : c.refinement) r.push_back({{"samples", n}, {"raw_constant", json_number(v)}});
  j["refinement"] = std::move(r);
  return j;
}

json to_json(const PartitionReport& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["covers"] = r.covers;
  j["overlap_measure"] = r.overlap_measure;
  json imgs = json::array();
  for (const auto& iv : r.images) imgs.push_back({iv.lo, iv.hi});
  j["images"] = std::move(imgs);
  json lips = json::array();
  for (double l : r.lipschitz) lips.push_back(json_number(l));
  j["lipschitz"] = std::move(lips);
  json cps = json::array();
  for (const auto& c : r.contact_points) {
    cps.push_back({{"point", c.point}, {"i1", c.i1 + 1}, {"x1", c.x1}, {"i2", c.i2 + 1}, {"x2", c.x2}});
  }
  j["contact_points"] = std::move(cps);
  j["issues"] = r.issues;
  return j;
}

json to_json(const JoinupReport& r) {
  json j;
  j["skipped"] = r.skipped;
  if (r.skipped) j["reason"] = r.reason;
  j["order"] = r.order;
  j["tol"] = r.tol;
  j["max_mismatch"] = json_number(r.max_mismatch);
  j["passed"] = r.passed;
  json e = json::array();
  for (const auto& x : r.entries) {
    json item{{"point", x.contact.point}, {"mismatch", json_number(x.mismatch)}};
    if (r.order >= 1) item["derivative_mismatch"] = json_number(x.derivative_mismatch);
    e.push_back(std::move(item));
  }
  j["entries"] = std::move(e);
  return j;
}

json to_json(const SolveResult& r) {
  return {{"iterations", r.iterations},
          {"residual", json_number(r.residual)},
          {"apriori_bound", json_number(r.apriori_bound)},
          {"s_used", json_number(r.s_used)},
          {"first_step", json_number(r.first_step)},
          {"certified", r.certified}};
}

void write_atomic(const std::filesystem::path& target, const std::string& content) {
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void write_json_atomic(const std::filesystem::path& target, const json& j) {
  write_atomic(target, j.dump(2) + "\n");
}

}  // namespace nlfi
