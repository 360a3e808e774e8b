#include "astroturf/analytics.hpp"

#include <algorithm>
#include <set>

#include "astroturf/error.hpp"

namespace astroturf::analytics {

std::uint64_t TimeSeries::total() const {
    std::uint64_t n = 0;
    for (const auto& [type, counts] : series) {
        for (auto c : counts) n += c;
    }
    return n;
}

RankedCounts RankedCounts::from_counts(const std::map<std::string, std::uint64_t>& counts, std::size_t k) {
    RankedCounts r;
    for (const auto& [key, n] : counts) {
        if (n > 0) r.entries.emplace_back(key, n);
    }
    // std::map iteration is already key-ascending, so a stable sort keeps key order on ties.
    std::stable_sort(r.entries.begin(), r.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (r.entries.size() > k) r.entries.resize(k);
    return r;
}

namespace {

void require_k(std::size_t k) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
}

}  // namespace

TimeSeries tweet_type_timeseries(const Store& store, std::int64_t bin_width_seconds) {
    if (bin_width_seconds <= 0) throw InvalidArgument("bin width must be positive");
    TimeSeries ts;
    ts.bin_width_seconds = bin_width_seconds;
    if (store.empty()) return ts;

    Timestamp lo = Timestamp::max();
    Timestamp hi = Timestamp::min();
    store.for_each_tweet([&](const Tweet& t) {
        lo = std::min(lo, t.created_at);
        hi = std::max(hi, t.created_at);
    });
    if (lo > hi) return ts;
    ts.origin = floor_day(lo);
    if (kSecondsPerDay % bin_width_seconds == 0) {
        auto offset = to_unix(lo) - to_unix(ts.origin);
        ts.origin += seconds{offset - offset % bin_width_seconds};
    }
    ts.bins = static_cast<std::size_t>((to_unix(hi) - to_unix(ts.origin)) / bin_width_seconds) + 1;
    store.for_each_tweet([&](const Tweet& t) {
        auto& counts = ts.series[t.tweet_type];
        if (counts.empty()) counts.assign(ts.bins, 0);
        ++counts[static_cast<std::size_t>((to_unix(t.created_at) - to_unix(ts.origin)) / bin_width_seconds)];
    });
    return ts;
}

RankedCounts top_hashtags(const Store& store, std::size_t k) {
    require_k(k);
    std::map<std::string, std::uint64_t> counts;
    store.for_each_tweet([&](const Tweet& t) {
        for (const auto& h : t.hashtags) ++counts[h];
    });
    return RankedCounts::from_counts(counts, k);
}

RankedCounts top_hashtag_pairs(const Store& store, std::size_t k) {
    require_k(k);
    std::map<std::string, std::uint64_t> counts;
    std::vector<std::string> tags;
    store.for_each_tweet([&](const Tweet& t) {
        tags.assign(t.hashtags.begin(), t.hashtags.end());
        std::sort(tags.begin(), tags.end());
        tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
        for (std::size_t i = 0; i < tags.size(); ++i) {
            for (std::size_t j = i + 1; j < tags.size(); ++j) ++counts[tags[i] + "+" + tags[j]];
        }
    });
    return RankedCounts::from_counts(counts, k);
}

RankedCounts top_media(const Store& store, std::size_t k) {
    require_k(k);
    std::map<std::string, std::uint64_t> counts;
    store.for_each_tweet([&](const Tweet& t) {
        for (const auto& m : t.media_ids) ++counts[m];
    });
    return RankedCounts::from_counts(counts, k);
}

RankedCounts top_referenced_users(const Store& store, std::size_t k, ReferenceMode mode) {
    require_k(k);
    const TweetType wanted = mode == ReferenceMode::Quoted ? TweetType::Quote : TweetType::Retweet;
    std::map<UserId, std::uint64_t> by_id;
    store.for_each_tweet([&](const Tweet& t) {
        if (t.tweet_type == wanted && t.referenced_author_id) ++by_id[*t.referenced_author_id];
    });
    std::map<std::string, std::uint64_t> counts;
    for (const auto& [id, n] : by_id) counts[store.display_key(id)] += n;
    return RankedCounts::from_counts(counts, k);
}

}  // namespace astroturf::analytics
