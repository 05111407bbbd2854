#include "swdae/io.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

namespace swdae {

std::string format_double(double x)
{
    if (x == 0.0)
        return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0)
            os << ',';
        os << cells[i];
    }
    os << '\n';
}

void write_matrix_csv(std::ostream& os, const Matrix& m, const std::string& column_prefix)
{
    std::vector<std::string> cells;
    for (Index j = 0; j < m.cols(); ++j)
        cells.push_back(column_prefix + std::to_string(j + 1));
    write_csv_row(os, cells);
    if (m.cols() == 0)
        return;
    for (Index i = 0; i < m.rows(); ++i) {
        cells.clear();
        for (Index j = 0; j < m.cols(); ++j)
            cells.push_back(format_double(m(i, j)));
        write_csv_row(os, cells);
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(ErrorKind::InvalidArgument, "cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            fail(ErrorKind::InvalidArgument, "failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::InvalidArgument, "cannot move output into place at " + path.string());
    }
}

}  // namespace swdae
