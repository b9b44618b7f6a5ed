#include "leadcache/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace leadcache {

namespace {

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != ' ' && c != '\t') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& s, std::size_t line)
{
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("expected an integer, got '" + s + "'", line);
    return v;
}

double parse_double(const std::string& s, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw ParseError("expected a number, got '" + s + "'", line);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("expected a number, got '" + s + "'", line);
    }
}

// Data rows with the expected field count; the header line is skipped.
template <class F>
void for_each_row(std::istream& in, std::size_t fields, F f)
{
    std::string line;
    std::size_t no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty() || line == "\r")
            continue;
        auto cols = split_csv(line);
        if (first) {
            first = false;
            if (!cols.empty() && !cols[0].empty() &&
                !(std::isdigit(static_cast<unsigned char>(cols[0][0])) || cols[0][0] == '-'))
                continue;
        }
        if (cols.size() != fields)
            throw ParseError("expected " + std::to_string(fields) + " fields", no);
        f(cols, no);
    }
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return in;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows)
{
    out << "t,policy,hits,fetches,cum_hits,cum_fetches\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.policy << ',' << r.hits << ',' << r.fetches << ',' << r.cum_hits
            << ',' << r.cum_fetches << '\n';
}

void write_theta_csv(std::ostream& out, const std::vector<Coefficient>& theta)
{
    out << "user_id,file_id,value\n";
    for (const auto& c : theta)
        out << c.user << ',' << c.file << ',' << format_double(c.value) << '\n';
}

std::vector<Coefficient> read_theta_csv(std::istream& in)
{
    std::vector<Coefficient> out;
    for_each_row(in, 3, [&](const std::vector<std::string>& c, std::size_t no) {
        out.push_back({static_cast<UserId>(parse_long(c[0], no)),
                       static_cast<FileId>(parse_long(c[1], no)), parse_double(c[2], no)});
    });
    return out;
}

void write_fractional_csv(std::ostream& out, const FractionalAllocation& frac)
{
    out << "kind,entity_id,file_id,value\n";
    for (CacheId j = 0; j < frac.num_caches; ++j)
        for (std::size_t l = 0; l < frac.files.size(); ++l)
            out << "y," << j << ',' << frac.files[l] << ',' << format_double(frac.y_at(j, l))
                << '\n';
    for (CacheId j = 0; j < frac.num_caches; ++j)
        out << "slack," << j << ",-1," << format_double(frac.slack[j]) << '\n';
    for (const auto& z : frac.z)
        out << "z," << z.user << ',' << z.file << ',' << format_double(z.value) << '\n';
    out << "objective,-1,-1," << format_double(frac.objective) << '\n';
}

FractionalAllocation read_fractional_csv(std::istream& in)
{
    std::map<std::pair<CacheId, FileId>, double> y;
    std::map<CacheId, double> slack;
    FractionalAllocation out;
    for_each_row(in, 4, [&](const std::vector<std::string>& c, std::size_t no) {
        const long a = parse_long(c[1], no), b = parse_long(c[2], no);
        const double v = parse_double(c[3], no);
        if (c[0] == "y") {
            if (a < 0 || b < 0)
                throw ParseError("negative id in y row", no);
            y[{static_cast<CacheId>(a), static_cast<FileId>(b)}] = v;
        } else if (c[0] == "slack") {
            if (a < 0)
                throw ParseError("negative cache id in slack row", no);
            slack[static_cast<CacheId>(a)] = v;
        } else if (c[0] == "z") {
            out.z.push_back({static_cast<UserId>(a), static_cast<FileId>(b), v});
        } else if (c[0] == "objective") {
            out.objective = v;
        } else {
            throw ParseError("unknown row kind '" + c[0] + "'", no);
        }
    });
    int m = 0;
    for (const auto& [k, v] : y)
        m = std::max(m, k.first + 1);
    for (const auto& [k, v] : slack)
        m = std::max(m, k + 1);
    out.num_caches = m;
    for (const auto& [k, v] : y)
        out.files.push_back(k.second);
    std::sort(out.files.begin(), out.files.end());
    out.files.erase(std::unique(out.files.begin(), out.files.end()), out.files.end());
    out.y.assign(static_cast<std::size_t>(m) * out.files.size(), 0.0);
    out.slack.assign(m, 0.0);
    for (const auto& [k, v] : y) {
        const auto l = std::lower_bound(out.files.begin(), out.files.end(), k.second) -
                       out.files.begin();
        out.y_at(k.first, static_cast<std::size_t>(l)) = v;
    }
    for (const auto& [k, v] : slack)
        out.slack[k] = v;
    out.capacity = m > 0 ? static_cast<int>(std::lround(out.mass(0))) : 0;
    std::sort(out.z.begin(), out.z.end(), [](const Coefficient& a, const Coefficient& b) {
        return std::tie(a.user, a.file) < std::tie(b.user, b.file);
    });
    return out;
}

void write_configuration_csv(std::ostream& out, const CacheConfiguration& y)
{
    out << "cache_id,file_id\n";
    for (CacheId j = 0; j < y.num_caches(); ++j)
        for (FileId f : y.files(j))
            out << j << ',' << f << '\n';
}

CacheConfiguration read_configuration_csv(std::istream& in, int num_caches, int capacity)
{
    std::vector<std::vector<FileId>> files(num_caches);
    for_each_row(in, 2, [&](const std::vector<std::string>& c, std::size_t no) {
        const long j = parse_long(c[0], no), f = parse_long(c[1], no);
        if (j < 0 || j >= num_caches || f < 0)
            throw ParseError("cache or file id out of range", no);
        files[j].push_back(static_cast<FileId>(f));
    });
    CacheConfiguration y(num_caches, capacity);
    for (CacheId j = 0; j < num_caches; ++j)
        y.assign(j, std::move(files[j]));
    return y;
}

}  // namespace leadcache
