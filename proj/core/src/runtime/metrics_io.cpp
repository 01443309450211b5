#include "swarmview/runtime/metrics_io.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace swarmview::runtime {

std::string metrics_csv_header() {
  return "t,uav_id,d_t,d_o,d_m_min,beta_ref_deg,beta_act_deg,gamma_ref_deg,gamma_act_deg,g_gt,g_d,g_f,f_d,est_err_m";
}

std::string format_metrics_row(const MetricsSample& m) {
  return fmt::format("{:.3f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{:.4f},{:.6f}", m.t, m.uav,
                     m.d_t, m.d_o, m.d_m_min, rad2deg(m.beta_ref), rad2deg(m.beta_act), rad2deg(m.gamma_ref),
                     rad2deg(m.gamma_act), m.g_gt, m.g_d, m.g_f, m.f_d, m.est_err);
}

CsvMetricsWriter::CsvMetricsWriter(std::ostream& out) : out_(out) { out_ << metrics_csv_header() << '\n'; }

void CsvMetricsWriter::write(const TickReport& report) {
  for (const auto& m : report.metrics) {
    out_ << format_metrics_row(m) << '\n';
  }
}

std::string summary_json(const RunSummary& s, const std::vector<CommandEvent>& events) {
  using nlohmann::json;
  const auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json failures = json::array();
  for (const auto& f : s.failures) {
    failures.push_back(json{{"tick", f.tick}, {"t", f.t}, {"reason", f.reason}});
  }
  json evs = json::array();
  for (const auto& e : events) {
    const auto& r = e.request;
    json j{{"t", e.t},
           {"tick", e.tick},
           {"source", to_string(e.source)},
           {"target", gesture::to_string(r.target)},
           {"kind", r.kind == gesture::RequestKind::Delta ? "delta" : "absolute"},
           {"value", r.target.field == gesture::ParamField::Distance ? r.value : rad2deg(r.value)}};
    if (e.source == CommandSource::WorkerGesture) {
      j["gesture_id"] = e.gesture_id;
      j["during_gesture"] = e.during_gesture;
    }
    json params = json::array();
    for (const auto& p : e.params_after) {
      params.push_back(json{{"beta_deg", rad2deg(p.beta)}, {"gamma_deg", rad2deg(p.gamma)}, {"distance", p.distance}});
    }
    j["params"] = std::move(params);
    evs.push_back(std::move(j));
  }
  const auto rate = s.success_rate();
  json doc{{"ticks", s.ticks},
           {"duration", s.duration},
           {"min_d_m", num(s.min_d_m)},
           {"min_d_o", num(s.min_d_o)},
           {"max_speed", s.max_speed},
           {"max_accel", s.max_accel},
           {"worker_commands", s.worker_commands},
           {"operator_commands", s.operator_commands},
           {"worker_commands_during_gesture", s.worker_commands_during_gesture},
           {"gesture_success_rate", rate ? json(*rate) : json(nullptr)},
           {"hold_plans", s.hold_plans},
           {"failures", failures},
           {"events", evs}};
  return doc.dump(2) + "\n";
}

}  // namespace swarmview::runtime
