#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "astroturf/ingest.hpp"
#include "astroturf/tweet.hpp"

namespace astroturf {

// Per-user timelines persisted in a directory:
//   tweets.ndjson       one record per line, ordered by (author, created_at, id)
//   users.ndjson        latest profile snapshot per user, ordered by id
//   ingest_stats.json   counts from the ingest run
// The layout is deterministic, so equal input yields byte-identical files.
class Store {
public:
    Store() = default;
    explicit Store(std::map<UserId, UserTimeline> timelines) : timelines_(std::move(timelines)) {}

    static Store load(const std::filesystem::path& dir);
    void save(const std::filesystem::path& dir, const IngestStats* stats = nullptr) const;

    const std::map<UserId, UserTimeline>& timelines() const { return timelines_; }
    const UserTimeline* find(UserId id) const;

    std::size_t tweet_count() const;
    std::size_t user_count() const { return timelines_.size(); }
    bool empty() const { return timelines_.empty(); }

    // Screen name of the latest snapshot, or the decimal id when unknown.
    std::string display_key(UserId id) const;

    template <typename F>
    void for_each_tweet(F&& f) const {
        for (const auto& [id, tl] : timelines_) {
            for (const auto& t : tl.tweets) f(t);
        }
    }

private:
    std::map<UserId, UserTimeline> timelines_;
};

}  // namespace astroturf
