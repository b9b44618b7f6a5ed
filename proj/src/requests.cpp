#include "leadcache/requests.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "leadcache/random.hpp"

namespace leadcache {

RequestTrace::RequestTrace(int catalog_size, int num_users, std::size_t num_slots)
    : catalog_(catalog_size), n_(num_users), slots_(num_slots),
      requests_(num_slots * static_cast<std::size_t>(std::max(num_users, 0)), kNoRequest)
{
    if (catalog_size < 0 || num_users < 0)
        throw InvalidArgument("RequestTrace: negative size");
}

std::span<FileId> RequestTrace::append_slot()
{
    requests_.resize(requests_.size() + n_, kNoRequest);
    ++slots_;
    return slot(slots_ - 1);
}

RequestTrace RequestTrace::subrange(std::size_t begin, std::size_t end) const
{
    end = std::min(end, slots_);
    begin = std::min(begin, end);
    RequestTrace out(catalog_, n_, end - begin);
    std::copy(requests_.begin() + begin * n_, requests_.begin() + end * n_, out.requests_.begin());
    return out;
}

std::size_t RequestTrace::num_requests() const
{
    return static_cast<std::size_t>(
        std::count_if(requests_.begin(), requests_.end(), [](FileId f) { return f != kNoRequest; }));
}

bool RequestTrace::valid() const
{
    return std::all_of(requests_.begin(), requests_.end(),
                       [&](FileId f) { return f == kNoRequest || (f >= 0 && f < catalog_); });
}

namespace {

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == '\t' || c == ' ') {
            if (!cur.empty() || c == ',')
                out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

bool parse_int(const std::string& s, long long& v)
{
    if (s.empty())
        return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class Densifier {
public:
    explicit Densifier(int limit) : limit_(limit) {}
    FileId operator()(const std::string& token)
    {
        auto [it, inserted] = ids_.try_emplace(token, static_cast<FileId>(ids_.size()));
        if (inserted && limit_ > 0 && static_cast<int>(ids_.size()) > limit_)
            throw CatalogOverflow("trace: more than " + std::to_string(limit_) + " distinct files");
        return it->second;
    }
    int size() const { return static_cast<int>(ids_.size()); }

private:
    int limit_;
    std::unordered_map<std::string, FileId> ids_;
};

}  // namespace

RequestTrace parse_trace(std::istream& in, int num_users, Assignment assignment, int catalog_size)
{
    if (num_users < 1)
        throw InvalidArgument("load_trace: need at least one user");
    Densifier dense(catalog_size);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;

    if (assignment == Assignment::round_robin) {
        std::vector<FileId> flat;
        while (std::getline(in, line)) {
            ++lineno;
            if (blank(line))
                continue;
            auto cols = split_row(line);
            long long seq = 0;
            if (first) {
                first = false;
                if (cols.empty() || !parse_int(cols[0], seq))
                    continue;  // header
            }
            if (cols.size() < 2 || cols.size() > 3 || !parse_int(cols[0], seq) || cols[1].empty())
                throw ParseError("malformed raw trace row, expected seq,file_id[,size]", lineno);
            flat.push_back(dense(cols[1]));
        }
        const std::size_t n = static_cast<std::size_t>(num_users);
        RequestTrace trace(catalog_size > 0 ? catalog_size : dense.size(), num_users,
                           (flat.size() + n - 1) / n);
        for (std::size_t k = 0; k < flat.size(); ++k)
            trace.slot(k / n)[k % n] = flat[k];
        return trace;
    }

    struct Row {
        long long t, user;
        FileId file;
        std::size_t line;
    };
    std::vector<Row> rows;
    long long max_t = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line))
            continue;
        auto cols = split_row(line);
        long long t = 0, u = 0;
        if (first) {
            first = false;
            if (cols.empty() || !parse_int(cols[0], t))
                continue;
        }
        if (cols.size() != 3 || !parse_int(cols[0], t) || !parse_int(cols[1], u) || cols[2].empty())
            throw ParseError("malformed assigned trace row, expected t,user_id,file_id", lineno);
        if (t < 0)
            throw ParseError("negative slot index", lineno);
        if (u < 0 || u >= num_users)
            throw ParseError("user id out of range", lineno);
        rows.push_back({t, u, dense(cols[2]), lineno});
        max_t = std::max(max_t, t);
    }
    RequestTrace trace(catalog_size > 0 ? catalog_size : dense.size(), num_users,
                       static_cast<std::size_t>(max_t + 1));
    for (const auto& r : rows) {
        auto s = trace.slot(static_cast<std::size_t>(r.t));
        if (s[r.user] != kNoRequest)
            throw ParseError("two requests for one user in one slot", r.line);
        s[r.user] = r.file;
    }
    return trace;
}

RequestTrace load_trace(const std::string& path, int num_users, Assignment assignment,
                        int catalog_size)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open trace file: " + path);
    return parse_trace(in, num_users, assignment, catalog_size);
}

void write_trace(const RequestTrace& trace, std::ostream& out)
{
    out << "t,user_id,file_id\n";
    for (std::size_t t = 0; t < trace.length(); ++t) {
        auto s = trace.slot(t);
        for (int i = 0; i < trace.num_users(); ++i)
            if (s[i] != kNoRequest)
                out << t << ',' << i << ',' << s[i] << '\n';
    }
}

void save_trace(const RequestTrace& trace, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw InvalidArgument("cannot write trace file: " + path);
    write_trace(trace, out);
}

std::vector<double> zipf_weights(int catalog_size, double alpha)
{
    std::vector<double> w(catalog_size);
    for (int k = 0; k < catalog_size; ++k)
        w[k] = std::pow(static_cast<double>(k + 1), -alpha);
    return w;
}

RequestTrace gen_zipf(int catalog_size, double alpha, int num_users, std::size_t slots,
                      std::uint64_t seed)
{
    if (catalog_size < 1)
        throw InvalidArgument("gen_zipf: catalog must be non-empty");
    if (!(alpha >= 0.0))
        throw InvalidArgument("gen_zipf: alpha must be >= 0");
    const auto w = zipf_weights(catalog_size, alpha);
    std::discrete_distribution<FileId> pick(w.begin(), w.end());
    Rng rng = make_rng(seed);
    RequestTrace trace(catalog_size, num_users, slots);
    for (std::size_t t = 0; t < slots; ++t)
        for (auto& f : trace.slot(t))
            f = pick(rng);
    return trace;
}

RequestTrace gen_renewal(int catalog_size, int num_users, std::size_t slots,
                         const RenewalParams& params, std::uint64_t seed)
{
    if (catalog_size < 1 || num_users < 1)
        throw InvalidArgument("gen_renewal: empty catalog or no users");
    Rng rng = make_rng(seed);
    RequestTrace trace(catalog_size, num_users, slots);

    if (params.kind == InterArrival::geometric) {
        const auto& rates = params.rates;
        if (rates.size() != 1 && rates.size() != static_cast<std::size_t>(num_users))
            throw ConfigError("gen_renewal: need one rate row or one per user");
        std::vector<std::discrete_distribution<int>> pick;
        for (const auto& row : rates) {
            if (row.size() != static_cast<std::size_t>(catalog_size))
                throw ConfigError("gen_renewal: rate row length must equal catalog size");
            double total = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0))
                    throw ConfigError("gen_renewal: rates must lie in [0, 1]");
                total += p;
            }
            if (total > 1.0 + 1e-12)
                throw ConfigError("gen_renewal: per-user rates sum to more than 1");
            std::vector<double> w(row.begin(), row.end());
            w.push_back(std::max(0.0, 1.0 - total));  // idle outcome
            pick.emplace_back(w.begin(), w.end());
        }
        for (std::size_t t = 0; t < slots; ++t) {
            auto s = trace.slot(t);
            for (int i = 0; i < num_users; ++i) {
                const int k = pick[pick.size() == 1 ? 0 : i](rng);
                s[i] = k < catalog_size ? k : kNoRequest;
            }
        }
        return trace;
    }

    const auto& gaps = params.gaps;
    if (gaps.size() != static_cast<std::size_t>(catalog_size))
        throw ConfigError("gen_renewal: need one gap range per file");
    double load = 0.0;
    for (auto [lo, hi] : gaps) {
        if (lo < 1 || hi < lo)
            throw ConfigError("gen_renewal: gap range must satisfy 1 <= lo <= hi");
        load += 2.0 / (lo + hi);
    }
    if (load > 1.0 + 1e-12)
        throw ConfigError("gen_renewal: mean rates sum to more than 1");
    std::vector<std::uniform_int_distribution<int>> gap;
    for (auto [lo, hi] : gaps)
        gap.emplace_back(lo, hi);
    for (int i = 0; i < num_users; ++i) {
        // Due time of each file's next renewal; a renewal clock restarts at the
        // slot the request is actually served.
        std::vector<std::size_t> due(catalog_size);
        for (int f = 0; f < catalog_size; ++f)
            due[f] = static_cast<std::size_t>(gap[f](rng)) - 1;
        for (std::size_t t = 0; t < slots; ++t) {
            int chosen = -1;
            for (int f = 0; f < catalog_size; ++f)
                if (due[f] <= t && (chosen < 0 || due[f] < due[chosen]))
                    chosen = f;
            if (chosen >= 0) {
                trace.slot(t)[i] = chosen;
                due[chosen] = t + static_cast<std::size_t>(gap[chosen](rng));
            }
        }
    }
    return trace;
}

RequestTrace gen_adversarial_uniform(int k, int num_users, std::size_t slots, std::uint64_t seed)
{
    if (k < 1)
        throw InvalidArgument("gen_adversarial_uniform: k must be >= 1");
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<FileId> pick(0, 2 * k - 1);
    RequestTrace trace(2 * k, num_users, slots);
    for (std::size_t t = 0; t < slots; ++t) {
        const FileId f = pick(rng);
        for (auto& x : trace.slot(t))
            x = f;
    }
    return trace;
}

std::vector<std::pair<std::size_t, std::size_t>> split_intervals(std::size_t length, int parts)
{
    if (parts < 1)
        throw InvalidArgument("split_intervals: parts must be >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t width = length / parts;
    for (int p = 0; p < parts; ++p) {
        const std::size_t b = width * p;
        const std::size_t e = (p + 1 == parts) ? length : b + width;
        out.emplace_back(b, e);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> recall_distance_histogram(const RequestTrace& trace)
{
    std::vector<std::size_t> last(trace.catalog_size(), SIZE_MAX);
    std::map<std::size_t, std::size_t> hist;
    std::size_t pos = 0;
    for (std::size_t t = 0; t < trace.length(); ++t)
        for (FileId f : trace.slot(t)) {
            if (f == kNoRequest)
                continue;
            if (last[f] != SIZE_MAX)
                ++hist[pos - last[f]];
            last[f] = pos++;
        }
    return {hist.begin(), hist.end()};
}

}  // namespace leadcache
