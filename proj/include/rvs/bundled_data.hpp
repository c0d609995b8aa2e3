#pragma once

#include <string_view>

// Contents of data/*.toml, embedded at configure time.
namespace rvs::bundled {

std::string_view labels_toml();
std::string_view sentiment_labels_toml();
std::string_view alignment_toml();

}  // namespace rvs::bundled
