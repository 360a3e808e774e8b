#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "astroturf/ingest.hpp"
#include "astroturf/store.hpp"
#include "astroturf/tweet.hpp"

namespace testing {

using namespace astroturf;

inline Tweet make_tweet(TweetId id, UserId author, std::int64_t unix_seconds, std::string text = "hello",
                        TweetType type = TweetType::Original) {
    Tweet t;
    t.tweet_id = id;
    t.author.user_id = author;
    t.author.screen_name = "u" + std::to_string(author);
    t.created_at = from_unix(unix_seconds);
    t.text = std::move(text);
    t.tweet_type = type;
    t.client_source = "Twitter Web Client";
    return t;
}

inline Store make_store(std::vector<Tweet> tweets) {
    std::map<UserId, UserTimeline> timelines;
    build_timelines(std::move(tweets), timelines);
    return Store(std::move(timelines));
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("astroturf_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
