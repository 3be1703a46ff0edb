#pragma once

#include <string>
#include <vector>

#include "wcmdp/simulator.hpp"

namespace wcmdp {

/// "%.12g" with a '.' separator regardless of locale.
std::string format_number(double v);

/// Header `N,policy,replications,mean,ci95,gap,updates_mean`.
std::string campaign_csv(const std::vector<CampaignResult>& rows);

struct CaseStudyRow {
  std::string scenario;
  bool fairness = false;
  CampaignResult result;
};

/// Header `scenario,fairness,policy,N,mean,ci95,gap,updates_mean`.
std::string casestudy_csv(const std::vector<CaseStudyRow>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  ///< half-width of the whisker, same length as y
};

struct PlotPanel {
  std::string title;
  std::vector<PlotSeries> series;
  /// Draw dashed guides with slopes -1/2 and -1 through the first point.
  bool reference_slopes = true;
};

/// 800x600 SVG with log-log axes, one panel per entry laid out side by side.
/// Points with y <= 0 cannot be placed on a log axis and are left out.
std::string loglog_svg(const std::vector<PlotPanel>& panels);

/// Gap against N with CI whiskers for one rate study.
std::string rate_study_svg(const RateStudy& study, const std::string& title);

}  // namespace wcmdp
