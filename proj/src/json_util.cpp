#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace swdae::detail {

json parse_json(std::string_view text, std::string_view what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ParseError, std::string(what) + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const json& require_field(const json& obj, const char* key, const std::string& context)
{
    if (!obj.is_object())
        fail(ErrorKind::ParseError, context + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        fail(ErrorKind::ParseError, context + ": missing field \"" + key + "\"");
    return *it;
}

double as_double(const json& v, const std::string& context)
{
    if (!v.is_number())
        fail(ErrorKind::ParseError, context + ": expected a number");
    return v.get<double>();
}

Index as_index(const json& v, const std::string& context)
{
    if (!v.is_number_integer() || v.get<long long>() < 0)
        fail(ErrorKind::ParseError, context + ": expected a nonnegative integer");
    return static_cast<Index>(v.get<long long>());
}

Matrix as_matrix(const json& v, Index rows, Index cols, const std::string& context)
{
    if (!v.is_array())
        fail(ErrorKind::ParseError, context + ": expected a nested array");
    if (static_cast<Index>(v.size()) != rows)
        fail(ErrorKind::DimensionMismatch, context + ": has " + std::to_string(v.size()) + " rows, expected " +
                                               std::to_string(rows));
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array())
            fail(ErrorKind::ParseError, context + ": row " + std::to_string(i + 1) + " is not an array");
        if (static_cast<Index>(row.size()) != cols)
            fail(ErrorKind::DimensionMismatch, context + ": row " + std::to_string(i + 1) + " has " +
                                                   std::to_string(row.size()) + " entries, expected " +
                                                   std::to_string(cols));
        for (Index j = 0; j < cols; ++j)
            m(i, j) = as_double(row[static_cast<std::size_t>(j)],
                                context + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
    }
    if (!m.allFinite() && m.size() > 0)
        fail(ErrorKind::NonFinite, context + ": non-finite entry");
    return m;
}

json to_json(const Matrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace swdae::detail
