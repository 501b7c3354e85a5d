#include "bns/features.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bns/errors.hpp"
#include "bns/stats.hpp"

namespace bns {

namespace {

bool valid_iso_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    int mm = (d[5] - '0') * 10 + (d[6] - '0');
    int dd = (d[8] - '0') * 10 + (d[9] - '0');
    return mm >= 1 && mm <= 12 && dd >= 1 && dd <= 31;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void PriceSeries::validate() const {
    if (dates.size() != prices.size())
        throw ValidationError("PriceSeries: dates and prices differ in length");
    if (prices.size() < 2) throw ValidationError("PriceSeries: need at least 2 rows");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
            std::ostringstream os;
            os << "PriceSeries: price at index " << i << " must be finite and > 0";
            throw ValidationError(os.str());
        }
        if (!valid_iso_date(dates[i])) {
            std::ostringstream os;
            os << "PriceSeries: date at index " << i << " is not YYYY-MM-DD";
            throw ValidationError(os.str());
        }
        if (i > 0 && !(dates[i - 1] < dates[i])) {
            std::ostringstream os;
            os << "PriceSeries: dates must be strictly increasing (index " << i << ")";
            throw ValidationError(os.str());
        }
    }
}

PriceSeries load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_csv: cannot open '" + path + "'");

    PriceSeries series;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (row == 1) continue;  // header
        if (t.empty()) continue;
        std::size_t comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            std::ostringstream os;
            os << "load_csv: row " << row << ": expected exactly two columns date,price";
            throw ParseError(os.str());
        }
        std::string date = trim(t.substr(0, comma));
        std::string price_str = trim(t.substr(comma + 1));
        if (!valid_iso_date(date)) {
            std::ostringstream os;
            os << "load_csv: row " << row << ": bad date '" << date << "'";
            throw ParseError(os.str());
        }
        double price;
        std::size_t used = 0;
        try {
            price = std::stod(price_str, &used);
        } catch (const std::exception&) {
            std::ostringstream os;
            os << "load_csv: row " << row << ": non-numeric price '" << price_str << "'";
            throw ParseError(os.str());
        }
        if (used != price_str.size()) {
            std::ostringstream os;
            os << "load_csv: row " << row << ": non-numeric price '" << price_str << "'";
            throw ParseError(os.str());
        }
        if (!(price > 0.0) || !std::isfinite(price)) {
            std::ostringstream os;
            os << "load_csv: row " << row << ": non-positive price " << price_str;
            throw ValidationError(os.str());
        }
        if (!series.dates.empty()) {
            if (series.dates.back() == date) {
                std::ostringstream os;
                os << "load_csv: row " << row << ": duplicate date " << date;
                throw ValidationError(os.str());
            }
            if (date < series.dates.back()) {
                std::ostringstream os;
                os << "load_csv: row " << row << ": dates not increasing (" << date << ")";
                throw ValidationError(os.str());
            }
        }
        series.dates.push_back(date);
        series.prices.push_back(price);
    }
    series.validate();
    return series;
}

std::vector<double> daily_changes(const PriceSeries& series) {
    series.validate();
    std::vector<double> out;
    out.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i)
        out.push_back(series.prices[i] - series.prices[i - 1]);
    return out;
}

std::vector<double> log_returns(const PriceSeries& series) {
    series.validate();
    std::vector<double> out;
    out.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i)
        out.push_back(std::log(series.prices[i] / series.prices[i - 1]));
    return out;
}

SummaryStats summary_stats(const PriceSeries& series) {
    std::vector<double> change = daily_changes(series);
    std::vector<double> pct;
    pct.reserve(change.size());
    for (std::size_t i = 1; i < series.size(); ++i)
        pct.push_back((series.prices[i] - series.prices[i - 1]) / series.prices[i - 1] * 100.0);

    auto block = [](const std::vector<double>& xs) {
        SummaryStats::Block b;
        RunningStats acc = accumulate(xs);
        b.mean = acc.mean();
        b.median = median(xs);
        b.max = *std::max_element(xs.begin(), xs.end());
        b.min = *std::min_element(xs.begin(), xs.end());
        return b;
    };
    return SummaryStats{block(change), block(pct)};
}

std::vector<RvPoint> realized_volatility_series(const PriceSeries& series, std::size_t window) {
    series.validate();
    if (window == 0) throw ValidationError("realized_volatility_series: window must be > 0");
    if (series.size() < window + 1)
        throw SeriesTooShort("realized_volatility_series: need at least window+1 prices");

    std::vector<double> lr = log_returns(series);  // lr[j-1] is the return of day j
    std::vector<RvPoint> out;
    out.reserve(series.size() - window);
    for (std::size_t i = window; i < series.size(); ++i) {
        double ss = 0.0;
        for (std::size_t j = i - window + 1; j <= i; ++j) ss += lr[j - 1] * lr[j - 1];
        out.push_back(RvPoint{i, std::sqrt(ss)});
    }
    return out;
}

std::vector<RvReturnPoint> rv_return_pct(const std::vector<RvPoint>& rv_series) {
    if (rv_series.size() < 2)
        throw SeriesTooShort("rv_return_pct: need at least 2 realized-volatility points");
    std::vector<RvReturnPoint> out;
    out.reserve(rv_series.size() - 1);
    for (std::size_t i = 1; i < rv_series.size(); ++i) {
        double prev = rv_series[i - 1].rv;
        if (prev == 0.0) {
            out.push_back(RvReturnPoint{rv_series[i].index, 0.0, true});
        } else {
            double val = (rv_series[i].rv - prev) / prev * 100.0;
            out.push_back(RvReturnPoint{rv_series[i].index, val, false});
        }
    }
    return out;
}

std::vector<int> volatility_crash_days(const PriceSeries& series, std::size_t window,
                                       double crash_quantile) {
    series.validate();
    if (!(crash_quantile >= 0.0 && crash_quantile <= 1.0))
        throw ValidationError("volatility_crash_days: crash_quantile must lie in [0, 1]");
    if (series.size() < 2 * window + 1)
        throw SeriesTooShort("volatility_crash_days: need at least 2*window+1 prices");

    std::vector<RvReturnPoint> q = rv_return_pct(realized_volatility_series(series, window));

    // The flagged entries are division-by-zero placeholders, not volatility
    // movements; they take no part in the quantile or in crash candidacy.
    std::vector<double> values;
    values.reserve(q.size());
    for (const RvReturnPoint& p : q)
        if (!p.flagged) values.push_back(p.value);

    std::vector<int> crash(series.size(), 0);
    if (values.empty()) return crash;
    const double threshold = quantile(values, crash_quantile);

    for (std::size_t k = 0; k + window <= q.size(); ++k) {
        bool any = false;
        double m = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            if (q[k + j].flagged) continue;
            if (!any || q[k + j].value > m) m = q[k + j].value;
            any = true;
        }
        if (!any || m < threshold) continue;
        for (std::size_t j = 0; j < window; ++j)
            if (!q[k + j].flagged && q[k + j].value == m) crash[q[k + j].index] = 1;
    }
    return crash;
}

namespace {

LabeledDataset make_rows(const PriceSeries& series, std::size_t w,
                         const std::vector<int>& day_hit, std::size_t hits_needed,
                         std::vector<std::string> flags) {
    // day_hit[j] counts the labeling events on day j; a row is positive when
    // its look-ahead days accumulate at least hits_needed of them.
    std::vector<double> change = daily_changes(series);
    const std::size_t n = series.size();

    LabeledDataset ds;
    ds.window_w = w;
    ds.quality_flags = std::move(flags);
    for (std::size_t i = 1; i + 2 * w - 1 <= n - 1; ++i) {
        std::vector<double> row(change.begin() + static_cast<std::ptrdiff_t>(i - 1),
                                change.begin() + static_cast<std::ptrdiff_t>(i - 1 + w));
        std::size_t hits = 0;
        for (std::size_t j = i + w; j <= i + 2 * w - 1; ++j)
            hits += static_cast<std::size_t>(day_hit[j]);
        ds.origin_index.push_back(i);
        ds.features.push_back(std::move(row));
        ds.targets.push_back(hits >= hits_needed ? 1 : 0);
    }
    return ds;
}

} // namespace

LabeledDataset label_volatility(const PriceSeries& series, std::size_t window,
                                double crash_quantile) {
    if (window == 0) throw ValidationError("label_volatility: window must be > 0");
    if (series.size() < 2 * window + 1)
        throw SeriesTooShort("label_volatility: need at least 2*window+1 prices");

    std::vector<int> crash = volatility_crash_days(series, window, crash_quantile);

    std::vector<std::string> flags;
    for (const RvReturnPoint& p : rv_return_pct(realized_volatility_series(series, window))) {
        if (p.flagged) {
            std::ostringstream os;
            os << "rv_return at index " << p.index << ": previous rv is zero, value set to 0";
            flags.push_back(os.str());
        }
    }
    return make_rows(series, window, crash, 1, std::move(flags));
}

std::vector<Drawdown> compute_drawdowns(const PriceSeries& series) {
    series.validate();
    const std::vector<double>& p = series.prices;
    const std::size_t n = p.size();

    std::vector<Drawdown> out;
    std::size_t i = 0;
    while (i + 1 < n) {
        if (p[i + 1] < p[i]) {
            std::size_t s = i;
            std::size_t e = i + 1;
            while (e + 1 < n && p[e + 1] < p[e]) ++e;
            out.push_back(Drawdown{s, e, (p[e] - p[s]) / p[s], e - s});
            i = e;
        } else {
            ++i;
        }
    }
    return out;
}

LabeledDataset label_duration(const PriceSeries& series, std::size_t window,
                              std::size_t min_duration_D, std::size_t min_count) {
    if (window == 0) throw ValidationError("label_duration: window must be > 0");
    if (min_count == 0) throw ValidationError("label_duration: min_count must be > 0");
    if (series.size() < 2 * window + 1)
        throw SeriesTooShort("label_duration: need at least 2*window+1 prices");

    std::vector<int> starts(series.size(), 0);
    for (const Drawdown& d : compute_drawdowns(series))
        if (d.duration >= min_duration_D) starts[d.start_index] += 1;
    return make_rows(series, window, starts, min_count, {});
}

namespace {

LabeledDataset select_rows(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
    LabeledDataset out;
    out.window_w = ds.window_w;
    for (std::size_t idx : rows) {
        out.origin_index.push_back(ds.origin_index[idx]);
        out.features.push_back(ds.features[idx]);
        out.targets.push_back(ds.targets[idx]);
    }
    return out;
}

} // namespace

SplitResult train_test_split_by_index(const LabeledDataset& dataset, IndexRange train_range,
                                      IndexRange test_range, LeakagePolicy policy) {
    if (train_range.empty())
        throw ValidationError("train_test_split_by_index: empty train range");
    if (!test_range.empty()) {
        if (test_range.lo <= train_range.hi && train_range.lo <= test_range.hi)
            throw OverlapError("train_test_split_by_index: train and test ranges overlap");
        if (test_range.lo <= train_range.hi)
            throw OverlapError("train_test_split_by_index: test range must come after train");
    }

    const std::size_t w = dataset.window_w;
    std::vector<std::size_t> train_rows, test_rows;
    std::size_t pruned = 0;
    for (std::size_t idx = 0; idx < dataset.origin_index.size(); ++idx) {
        std::size_t origin = dataset.origin_index[idx];
        if (origin >= train_range.lo && origin <= train_range.hi) {
            bool leaks = !test_range.empty() && origin + 2 * w - 1 >= test_range.lo;
            if (leaks) {
                if (policy == LeakagePolicy::Error)
                    throw OverlapError(
                        "train_test_split_by_index: train row look-ahead reaches the test range");
                if (policy == LeakagePolicy::Prune) {
                    ++pruned;
                    continue;
                }
            }
            train_rows.push_back(idx);
        } else if (!test_range.empty() && origin >= test_range.lo && origin <= test_range.hi) {
            test_rows.push_back(idx);
        }
    }

    SplitResult result;
    result.train = select_rows(dataset, train_rows);
    result.test = select_rows(dataset, test_rows);
    result.pruned_train_rows = pruned;
    return result;
}

void write_dataset_csv(const LabeledDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("write_dataset_csv: cannot open '" + path + "' for writing");
    out << "origin_index";
    for (std::size_t j = 1; j <= dataset.window_w; ++j) out << ",f" << j;
    out << ",theta\n";
    char buf[40];
    for (std::size_t i = 0; i < dataset.origin_index.size(); ++i) {
        out << dataset.origin_index[i];
        for (double f : dataset.features[i]) {
            std::snprintf(buf, sizeof(buf), "%.12g", f);
            out << ',' << buf;
        }
        out << ',' << dataset.targets[i] << '\n';
    }
}

} // namespace bns
