#include "lillab/scaling/checks.hpp"

#include <algorithm>
#include <cmath>

#include "lillab/error.hpp"

namespace lillab::scaling {

namespace {

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void record(PropertyResult& p, double violation, double tolerance, nlohmann::json sample) {
  if (violation > p.worst_violation) {
    p.worst_violation = violation;
    p.worst_sample = std::move(sample);
  }
  if (violation > tolerance) p.pass = false;
}

}  // namespace

GenericContraction as_generic(const ContractionFamily& phi) {
  require(!phi.time_dependent(), "as_generic: time-dependent family; fix eps and t first");
  return GenericContraction{phi.center(), [phi](const Vec& a, const Vec& y) { return phi.apply(a, y); },
                            [phi](const Vec& a, const Vec& y) { return phi.invert(a, y); }};
}

bool PropertyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass; });
}

const PropertyResult& PropertyReport::property(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return p;
  throw InvalidInput("property report: no property '" + name + "'");
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json j;
  j["properties"] = nlohmann::json::array();
  for (const auto& p : properties) {
    nlohmann::json e{{"name", p.name}, {"pass", p.pass}, {"worst_violation", p.worst_violation}};
    e["worst_sample"] = p.worst_sample ? *p.worst_sample : nlohmann::json(nullptr);
    j["properties"].push_back(std::move(e));
  }
  j["modulus"] = nlohmann::json::array();
  for (const auto& m : modulus)
    j["modulus"].push_back({{"index_gap", m.index_gap}, {"max_displacement", m.max_displacement}});
  j["all_pass"] = all_pass();
  return j;
}

PropertyReport check_contraction_family(const GenericContraction& phi,
                                        const std::vector<std::pair<Vec, Vec>>& sample_pairs,
                                        const std::vector<std::pair<Vec, Vec>>& alpha_pairs, double tolerance) {
  require(!sample_pairs.empty() && !alpha_pairs.empty(), "check_contraction_family: empty samples");
  PropertyReport report;
  PropertyResult fixed{"fixed_center", true, 0.0, std::nullopt};
  PropertyResult nonexpansive{"nonexpansive", true, 0.0, std::nullopt};
  PropertyResult continuity{"index_continuity", true, 0.0, std::nullopt};

  for (const auto& [alpha, beta] : alpha_pairs) {
    require((alpha.array() >= beta.array()).all() && (beta.array() > 0.0).all(),
            "check_contraction_family: alpha pairs must satisfy alpha >= beta > 0");
    for (const Vec* a : {&alpha, &beta}) {
      const double v = (phi.map(*a, phi.center) - phi.center).norm();
      record(fixed, v, tolerance, {{"alpha", vec_json(*a)}});
    }
    for (const auto& [y, z] : sample_pairs) {
      const double da = (phi.map(alpha, y) - phi.map(alpha, z)).norm();
      const double db = (phi.map(beta, y) - phi.map(beta, z)).norm();
      record(nonexpansive, da - db, tolerance,
             {{"alpha", vec_json(alpha)}, {"beta", vec_json(beta)}, {"y", vec_json(y)}, {"z", vec_json(z)}});
    }
  }

  // (iii): move alpha towards beta along the direction of alpha / beta - 1,
  // scaled so that the largest component gap runs through the shrink sequence.
  const double shrink[] = {1.0, 1e-1, 1e-2, 1e-3};
  for (const auto& [alpha, beta] : alpha_pairs) {
    const Vec excess = ((alpha.array() / beta.array()) - 1.0).matrix();
    const double top = excess.maxCoeff();
    if (!(top > 0.0)) continue;
    const Vec dir = excess / top;
    const double g0 = std::min(1.0, top);
    double first = 0.0, last = 0.0;
    for (double s : shrink) {
      const Vec a = (beta.array() * (1.0 + g0 * s * dir.array())).matrix();
      const double gap = ((a.array() / beta.array()) - 1.0).matrix().norm();
      double disp = 0.0;
      for (const auto& [y, z] : sample_pairs)
        for (const Vec* p : {&y, &z}) disp = std::max(disp, (phi.map(a, phi.inverse(beta, *p)) - *p).norm());
      report.modulus.push_back({gap, disp});
      if (s == shrink[0]) first = disp;
      last = disp;
    }
    const bool ok = last <= tolerance || last <= 1e-2 * first;
    if (!ok) {
      continuity.pass = false;
      if (last > continuity.worst_violation) {
        continuity.worst_violation = last;
        continuity.worst_sample = nlohmann::json{{"alpha", vec_json(alpha)}, {"beta", vec_json(beta)}};
      }
    }
  }
  std::sort(report.modulus.begin(), report.modulus.end(),
            [](const ModulusRow& a, const ModulusRow& b) { return a.index_gap < b.index_gap; });
  report.properties = {fixed, nonexpansive, continuity};
  return report;
}

PropertyReport check_contraction_family(const ContractionFamily& phi,
                                        const std::vector<std::pair<Vec, Vec>>& sample_pairs,
                                        const std::vector<std::pair<Vec, Vec>>& alpha_pairs, double tolerance) {
  return check_contraction_family(as_generic(phi), sample_pairs, alpha_pairs, tolerance);
}

double index_ratio_bound(int ell, int k, double c, long j) {
  const double lc = std::log(1.0 / c);
  const double ratio = std::log(double(j) * lc) / std::log(double(j + 1) * lc);
  return std::pow(c, -0.5 * ell) * std::pow(ratio, 0.5 * k) - 1.0;
}

nlohmann::json IndexReport::to_json() const {
  nlohmann::json j = properties.to_json();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"j", r.j}, {"max_deviation", r.max_deviation}, {"closed_form_bound", r.closed_form_bound}});
  j["threshold_j"] = threshold_j ? nlohmann::json(*threshold_j) : nlohmann::json(nullptr);
  return j;
}

IndexReport check_asymptotic_index(const AsymptoticIndex& psi, double c, long j_lo, long j_hi, double tolerance_eps,
                                   std::size_t samples_per_bracket, std::size_t max_rows) {
  require(c > 0.0 && c < 1.0, "check_asymptotic_index: c must lie in (0, 1)");
  require(j_lo >= 1 && j_hi >= j_lo, "check_asymptotic_index: bad j range");
  require(std::pow(c, double(j_lo)) <= psi.eps_star(), "check_asymptotic_index: c^j exceeds eps_star");
  require(samples_per_bracket >= 2, "check_asymptotic_index: need at least the bracket endpoints");

  IndexReport out;
  PropertyResult monotone{"monotone", true, 0.0, std::nullopt};
  PropertyResult ratio{"ratio_stability", true, 0.0, std::nullopt};
  PropertyResult vanish{"vanishing", true, 0.0, std::nullopt};

  std::vector<IndexRatioRow> all;
  const double log_c = std::log(c);
  for (long j = j_lo; j <= j_hi; ++j) {
    // Geometric interpolation between c^{j+1} and c^j, endpoints included.
    std::vector<Vec> values;
    std::vector<double> deltas;
    for (std::size_t s = 0; s < samples_per_bracket; ++s) {
      const double w = double(s) / double(samples_per_bracket - 1);
      const double delta = std::exp((double(j) + w) * log_c);
      deltas.push_back(delta);
      values.push_back(psi(delta));
    }
    double dev = 0.0;
    for (const auto& a : values)
      for (const auto& b : values) dev = std::max(dev, ((a.array() / b.array()) - 1.0).abs().maxCoeff());
    // deltas decrease with s, so psi must decrease strictly as well.
    for (std::size_t s = 1; s < values.size(); ++s) {
      const double gap = (values[s - 1] - values[s]).minCoeff();
      if (!(gap > 0.0)) record(monotone, -gap + 1e-300, 0.0, {{"j", j}, {"delta", deltas[s]}});
    }
    double bound = 0.0;
    for (const auto& e : psi.exponents()) bound = std::max(bound, index_ratio_bound(e.ell, e.k, c, j));
    all.push_back({j, dev, bound});
  }
  for (const auto& e : psi.exponents()) {
    const double v = psi_component(e.ell, e.k, 1e-300);
    record(vanish, v, 1e-100, {{"ell", e.ell}, {"k", e.k}});
  }
  // Threshold: smallest j such that all later rows are below tolerance.
  std::optional<long> threshold;
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    if (it->max_deviation < tolerance_eps)
      threshold = it->j;
    else
      break;
  }
  out.threshold_j = threshold;
  for (const auto& r : all)
    if (r.max_deviation > ratio.worst_violation) {
      ratio.worst_violation = r.max_deviation;
      ratio.worst_sample = nlohmann::json{{"j", r.j}};
    }
  ratio.pass = threshold.has_value();

  const std::size_t stride = std::max<std::size_t>(1, (all.size() + max_rows - 1) / max_rows);
  for (std::size_t i = 0; i < all.size(); i += stride) out.rows.push_back(all[i]);
  if (!all.empty() && out.rows.back().j != all.back().j) out.rows.push_back(all.back());
  out.properties.properties = {monotone, ratio, vanish};
  return out;
}

}  // namespace lillab::scaling
