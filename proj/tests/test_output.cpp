#include <doctest.h>

#include "wcmdp/casestudy.hpp"
#include "wcmdp/output.hpp"
#include "wcmdp/simulator.hpp"

using namespace wcmdp;

TEST_CASE("campaign CSV") {
  CampaignResult r;
  r.N = 10;
  r.policy = "lp-update-full";
  r.replications = 5;
  r.mean = 0.5;
  r.ci95 = 0.01;
  r.gap = 0.1;
  r.updates_mean = 2;
  const std::string csv = campaign_csv({r});
  CHECK(csv == "N,policy,replications,mean,ci95,gap,updates_mean\n10,lp-update-full,5,0.5,0.01,0.1,2\n");
  const std::string cs = casestudy_csv({{"scarce", true, r}});
  CHECK(cs.rfind("scenario,fairness,policy,N,mean,ci95,gap,updates_mean\nscarce,on,lp-update-full,10,", 0) == 0);
}

TEST_CASE("log-log SVG") {
  PlotPanel panel;
  panel.title = "gap";
  panel.series.push_back({"full", {10, 100, 1000}, {0.1, 0.03, 0.01}, {0.01, 0.005, 0.001}});
  const std::string svg = loglog_svg({panel});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("full") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  const Counterexample c = build_counterexample(0.5);
  const RateStudy study = rate_study(c.model, {}, c.m0, {10, 20}, 50, 1);
  CHECK(rate_study_svg(study, "rate").find("<circle") != std::string::npos);
}
