#pragma once

#include <string>

#include <json.hpp>

#include "loewner/driving.hpp"
#include "loewner/flow.hpp"
#include "loewner/regularity.hpp"
#include "loewner/tip.hpp"
#include "loewner/tracer.hpp"

namespace loewner {

using json = nlohmann::json;

// 17 significant digits: lossless double round-trip, diff-able goldens.
std::string format_g17(double x);

// CSV with header `t,re,im`, one row per grid node, LF line endings.
std::string slit_to_csv(const TracedSlit& slit);
void write_text_file(const std::string& path, const std::string& contents);

json slit_to_json(const TracedSlit& slit);

// {family, params, T, seed}; derived (shifted/rescaled/...) drivers do not
// round-trip and are rejected.
json driving_to_json(const DrivingFunction& lambda);
DrivingFunction driving_from_json(const json& j);

// tabulated driver from CSV columns t,lambda (strictly increasing t, t_0 = 0)
DrivingFunction driving_from_csv(const std::string& path);

json flow_to_json(const DiscretizedFlow& flow);
DiscretizedFlow flow_from_json(const json& j);

json tip_frame_to_json(const TipFrame& frame);
json gamma_frame_to_json(const GammaFrame& frame);

// batch header: s,re_gamma,im_gamma,re_L,im_L,re_gp,im_gp[,re_gpp,im_gpp]
std::string tip_frames_to_csv(const std::vector<TipFrame>& frames);

json report_to_json(const VerificationReport& rep);
json holder_fit_to_json(const HolderFit& fit);

} // namespace loewner
