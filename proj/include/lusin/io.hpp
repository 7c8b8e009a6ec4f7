#pragma once

#include <optional>
#include <string>

#include "lusin/approx.hpp"
#include "lusin/content.hpp"
#include "lusin/space.hpp"

// Single-header nlohmann/json from vendor/.
#include "json.hpp"

namespace lusin {

using Json = nlohmann::ordered_json;

/// On-disk representation of a space: metric spec, weights, point ids and an
/// optional sample function u.
struct SpaceFile {
  MetricSpec spec;
  ArrayXd weights;
  std::vector<long long> ids;
  std::optional<ArrayXd> u;

  MetricMeasureSpace build() const { return MetricMeasureSpace::build(spec, weights, ids); }
};

/// Schema violations raise InputError with the JSON path of the offender.
SpaceFile space_file_from_json(const Json& j);
Json space_file_to_json(const SpaceFile& f);

/// CSV rows `id, x1..xd, weight, u`; a leading header row is accepted.
SpaceFile space_file_from_csv(const std::string& text);

/// Dispatches on the .json / .csv extension.
SpaceFile load_space_file(const std::string& path);
void save_space_file(const SpaceFile& f, const std::string& path);

Json cover_to_json(const MetricMeasureSpace& space, const BallCover& cover);
Json hypothesis_report_to_json(const HypothesisReport& rep);
Json lambda_row_to_json(const LambdaRow& row);
Json schedule_to_json(const ApproxParams& params, const ScheduleResult& sched,
                      const MetricMeasureSpace& space);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lusin
