#include "uspec/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

namespace uspec {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
    return std::move(ss).str();
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view cell, double& out) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        std::reverse(b, b + sizeof(T));
        std::memcpy(&v, b, sizeof(T));
        return v;
    }
}

template <class T>
T read_le(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return to_little(v);
}

Dataset parse_binary(const std::string& bytes) {
    if (bytes.size() < 16) throw FormatError("binary dataset shorter than its 16-byte header");
    const auto n = read_le<std::uint64_t>(bytes.data());
    const auto d = read_le<std::uint64_t>(bytes.data() + 8);
    if (n == 0 || d == 0) throw FormatError("binary header declares an empty dataset");
    const std::uint64_t available = (bytes.size() - 16) / 8;
    if (n > available || d > available / n) throw FormatError("binary dataset truncated");
    const std::uint64_t count = n * d;
    if (bytes.size() - 16 != count * 8)
        throw FormatError("binary payload has " + std::to_string(bytes.size() - 16) + " bytes, header implies " +
                          std::to_string(count * 8));
    std::vector<double> values(count);
    for (std::uint64_t i = 0; i < count; ++i) values[i] = read_le<double>(bytes.data() + 16 + 8 * i);
    return Dataset(n, d, std::move(values));
}

}  // namespace

DataFormat format_from_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return (ext == ".bin" || ext == ".f64") ? DataFormat::f64_binary : DataFormat::csv;
}

Dataset parse_csv(const std::string& text) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    bool first = true;
    std::size_t line_no = 0;
    std::string_view rest(text);
    std::vector<double> row;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;

        row.clear();
        bool numeric = true;
        std::string_view cells = line;
        while (true) {
            const auto comma = cells.find(',');
            double v = 0.0;
            if (!parse_number(cells.substr(0, comma), v)) numeric = false;
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            cells.remove_prefix(comma + 1);
        }
        if (first) {
            first = false;
            cols = row.size();
            if (!numeric) continue;  // header row
        }
        if (!numeric) throw FormatError("non-numeric cell on line " + std::to_string(line_no));
        if (row.size() != cols)
            throw FormatError("line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                              " columns, expected " + std::to_string(cols));
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw FormatError("CSV contains no data rows");
    return Dataset(rows, cols, std::move(values));
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
    const std::string bytes = read_file(path);
    return format == DataFormat::csv ? parse_csv(bytes) : parse_binary(bytes);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path, DataFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == DataFormat::f64_binary) {
        const std::uint64_t header[2] = {to_little<std::uint64_t>(data.n()), to_little<std::uint64_t>(data.dim())};
        out.write(reinterpret_cast<const char*>(header), sizeof(header));
        for (double v : data.values().values) {
            v = to_little(v);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    } else {
        char buf[32];
        for (std::size_t i = 0; i < data.n(); ++i) {
            const auto r = data.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (j) out.put(',');
                const auto res = std::to_chars(buf, buf + sizeof(buf), r[j]);
                out.write(buf, res.ptr - buf);
            }
            out.put('\n');
        }
    }
    if (!out) throw IoError("write failed on '" + path.string() + "'");
}

void save_labels(const Labeling& labeling, const std::filesystem::path& path) {
    if (labeling.size() == 0) throw ValueError("refusing to save an empty labeling");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (int v : labeling.labels) out << v << '\n';
    if (!out) throw IoError("write failed on '" + path.string() + "'");
}

Labeling load_labels(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<int> labels;
    std::string_view rest(text);
    std::size_t line_no = 0;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        const std::string_view line = trim(rest.substr(0, nl));
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        int v = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc() || ptr != line.data() + line.size() || v < 0)
            throw FormatError("bad label on line " + std::to_string(line_no) + " of '" + path.string() + "'");
        labels.push_back(v);
    }
    if (labels.empty()) throw FormatError("label file '" + path.string() + "' is empty");
    return Labeling::from_labels(std::move(labels));
}

}  // namespace uspec
