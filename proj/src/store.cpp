#include "astroturf/store.hpp"

#include <fstream>

#include <json.hpp>

#include "astroturf/error.hpp"

namespace astroturf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

const UserTimeline* Store::find(UserId id) const {
    auto it = timelines_.find(id);
    return it == timelines_.end() ? nullptr : &it->second;
}

std::size_t Store::tweet_count() const {
    std::size_t n = 0;
    for (const auto& [id, tl] : timelines_) n += tl.tweets.size();
    return n;
}

std::string Store::display_key(UserId id) const {
    const auto* tl = find(id);
    if (tl && !tl->profile.screen_name.empty()) return tl->profile.screen_name;
    return std::to_string(id);
}

void Store::save(const fs::path& dir, const IngestStats* stats) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create store " + dir.string() + ": " + ec.message());

    const fs::path tweets_path = dir / "tweets.ndjson";
    auto tweets = open_out(tweets_path);
    for (const auto& [id, tl] : timelines_) {
        for (const auto& t : tl.tweets) tweets << serialize_tweet(t) << '\n';
    }
    check_written(tweets, tweets_path);

    // Profiles are written as a tweet-less user object in the record format.
    const fs::path users_path = dir / "users.ndjson";
    auto users = open_out(users_path);
    for (const auto& [id, tl] : timelines_) {
        Tweet carrier;
        carrier.author = tl.profile;
        json j = json::parse(serialize_tweet(carrier));
        users << j.at("user").dump() << '\n';
    }
    check_written(users, users_path);

    if (stats) {
        json reasons = json::object();
        for (const auto& [reason, n] : stats->rejected_by_reason) reasons[reason] = n;
        json s = {{"records", stats->records},
                  {"rejected", stats->rejected},
                  {"rejected_by_reason", reasons},
                  {"off_topic", stats->off_topic},
                  {"duplicates", stats->duplicates},
                  {"on_topic", stats->exclusion.total},
                  {"excluded", stats->exclusion.excluded},
                  {"kept", stats->exclusion.kept},
                  {"excluded_fraction", stats->exclusion.excluded_fraction()},
                  {"users", timelines_.size()}};
        const fs::path stats_path = dir / "ingest_stats.json";
        auto out = open_out(stats_path);
        out << s.dump(2) << '\n';
        check_written(out, stats_path);
    }
}

Store Store::load(const fs::path& dir) {
    const fs::path tweets_path = dir / "tweets.ndjson";
    std::ifstream in(tweets_path, std::ios::binary);
    if (!in) throw DataError("not a store (missing " + tweets_path.string() + ")");
    std::vector<Tweet> tweets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            tweets.push_back(parse_tweet(line));
        } catch (const ParseError& e) {
            throw DataError(tweets_path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::map<UserId, UserTimeline> timelines;
    build_timelines(std::move(tweets), timelines);
    return Store(std::move(timelines));
}

}  // namespace astroturf
