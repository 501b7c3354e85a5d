#ifndef BNS_FEATURES_HPP
#define BNS_FEATURES_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace bns {

// Daily close series. Index convention: 0-based day positions; daily change
// and log return at day i compare day i to day i-1, so both exist for i >= 1.
struct PriceSeries {
    std::vector<std::string> dates;   // ISO YYYY-MM-DD, strictly increasing
    std::vector<double> prices;

    std::size_t size() const { return prices.size(); }
    void validate() const;
};

// CSV loader: header row, two columns date,price. Malformed rows raise
// ParseError with the row number; non-positive prices and non-monotone or
// duplicate dates raise ValidationError.
PriceSeries load_csv(const std::string& path);

std::vector<double> daily_changes(const PriceSeries& series);   // [i-1] holds p_i - p_{i-1}
std::vector<double> log_returns(const PriceSeries& series);     // [i-1] holds ln(p_i / p_{i-1})

struct SummaryStats {
    struct Block {
        double mean, median, max, min;
    };
    Block change;      // daily price change
    Block pct_change;  // daily percent change, 100 * change / previous price
};
SummaryStats summary_stats(const PriceSeries& series);

struct RvPoint {
    std::size_t index;  // day the 20-day realized-volatility window ends on
    double rv;
};

// rv_i = sqrt(sum of squared log returns over the window ending at day i),
// defined for i from `window` onward.
std::vector<RvPoint> realized_volatility_series(const PriceSeries& series,
                                                std::size_t window = 20);

struct RvReturnPoint {
    std::size_t index;
    double value;   // percent change of rv vs the previous day
    bool flagged;   // previous rv was zero; value emitted as 0
};
std::vector<RvReturnPoint> rv_return_pct(const std::vector<RvPoint>& rv_series);

// Day-indexed 0/1 vector of crash-like days: every rolling `window`-day window
// of rv-percentage-returns flags its maximum-attaining day(s), but only when
// that maximum clears the crash_quantile quantile of the whole rv-return
// series. crash_quantile = 0 reduces to the bare rolling-maximum rule.
std::vector<int> volatility_crash_days(const PriceSeries& series, std::size_t window = 20,
                                       double crash_quantile = 0.90);

struct Drawdown {
    std::size_t start_index;  // local maximum
    std::size_t end_index;    // next local minimum
    double depth_d;           // (p_min - p_max) / p_max, <= 0
    std::size_t duration;     // number of strictly decreasing steps, end - start
};

// All maximal strictly-decreasing runs with at least one down-step. Equal
// consecutive prices break a run; an opening rise or a terminal maximum
// produces nothing, so boundary-truncated pseudo-runs are excluded.
std::vector<Drawdown> compute_drawdowns(const PriceSeries& series);

// Feature rows for a window length w: row with origin i carries the daily
// changes at days [i, i+w-1] and a binary target computed from days
// [i+w, i+2w-1]; origins run from 1 to n-2w.
struct LabeledDataset {
    std::size_t window_w = 0;
    std::vector<std::size_t> origin_index;
    std::vector<std::vector<double>> features;
    std::vector<int> targets;
    std::vector<std::string> quality_flags;
};

// Target 1 iff the look-ahead days contain at least one crash-like day.
LabeledDataset label_volatility(const PriceSeries& series, std::size_t window = 20,
                                double crash_quantile = 0.90);

// Target 1 iff at least min_count drawdowns of duration >= min_duration_D
// start inside the look-ahead days.
LabeledDataset label_duration(const PriceSeries& series, std::size_t window = 10,
                              std::size_t min_duration_D = 2, std::size_t min_count = 2);

struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;  // inclusive; hi < lo denotes an empty range

    bool empty() const { return hi < lo; }
};

// What to do with train rows whose look-ahead reaches into the test range:
// drop them (default), fail, or keep them anyway.
enum class LeakagePolicy { Prune, Error, Allow };

struct SplitResult {
    LabeledDataset train;
    LabeledDataset test;
    std::size_t pruned_train_rows = 0;
};

// Rows assigned by origin index. Ranges must not overlap and test must come
// after train; a train row leaks when its look-ahead window (ending at
// origin + 2w - 1) does not finish before the test range begins.
SplitResult train_test_split_by_index(const LabeledDataset& dataset, IndexRange train_range,
                                      IndexRange test_range,
                                      LeakagePolicy policy = LeakagePolicy::Prune);

// Dataset CSV: header origin_index,f1..fw,theta.
void write_dataset_csv(const LabeledDataset& dataset, const std::string& path);

} // namespace bns

#endif
