#pragma once
// Private helpers for the JSON document formats.

#include "swdae/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace swdae::detail {

using json = nlohmann::json;

json parse_json(std::string_view text, std::string_view what);
std::string read_text_file(const std::filesystem::path& path);

const json& require_field(const json& obj, const char* key, const std::string& context);
double as_double(const json& v, const std::string& context);
Index as_index(const json& v, const std::string& context);

// Row-major nested array with exactly `rows` x `cols` entries.
Matrix as_matrix(const json& v, Index rows, Index cols, const std::string& context);

json to_json(const Matrix& m);

}  // namespace swdae::detail
