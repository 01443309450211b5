#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "swarmview/runtime/mission.hpp"

namespace swarmview::runtime {

/// "t,uav_id,d_t,d_o,d_m_min,beta_ref_deg,beta_act_deg,gamma_ref_deg,gamma_act_deg,g_gt,g_d,g_f,f_d,est_err_m"
std::string metrics_csv_header();
/// One CSV line without the trailing newline. Angles in degrees.
std::string format_metrics_row(const MetricsSample& m);

class CsvMetricsWriter {
 public:
  explicit CsvMetricsWriter(std::ostream& out);
  void write(const TickReport& report);

 private:
  std::ostream& out_;
};

/// Run summary plus the executed command events as a JSON document.
std::string summary_json(const RunSummary& summary, const std::vector<CommandEvent>& events);

}  // namespace swarmview::runtime
