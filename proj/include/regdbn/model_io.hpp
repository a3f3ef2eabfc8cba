#pragma once

#include <string>

#include "regdbn/baselines.hpp"
#include "regdbn/dbn.hpp"
#include "regdbn/pipeline.hpp"

namespace regdbn {

// Model container: a single JSON document with a format_version field and a
// kind tag ("dbn", "feedforward", "net_regressor", "nb", "kr"). Doubles are
// serialized with shortest round-trip notation, so save followed by load is
// bit-exact.
inline constexpr int kModelFormatVersion = 1;

std::string save_dbn(const DbnModel& dbn);
DbnModel load_dbn(const std::string& text);

std::string save_net(const FeedforwardNet& net);
FeedforwardNet load_net(const std::string& text);

std::string save_net_regressor(const NetRegressor& model);
NetRegressor load_net_regressor(const std::string& text);

std::string save_nb(const NbModel& model);
NbModel load_nb(const std::string& text);

std::string save_kr(const KernelModel& model);
KernelModel load_kr(const std::string& text);

// Kind tag of a serialized model, for dispatch.
std::string model_kind(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace regdbn
