#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astroturf/time.hpp"

namespace astroturf {

using UserId = std::uint64_t;
using TweetId = std::uint64_t;

enum class TweetType : std::uint8_t { Original, Retweet, Quote, Reply };

inline constexpr std::array<TweetType, 4> kTweetTypes = {TweetType::Original, TweetType::Retweet,
                                                         TweetType::Quote, TweetType::Reply};

std::string_view to_string(TweetType t);

struct UserProfile {
    UserId user_id = 0;
    std::string screen_name;
    std::string display_name;
    Timestamp account_created_at{};
    std::uint64_t followers = 0;
    std::uint64_t friends = 0;
    bool verified = false;
    bool default_profile_image = false;
    bool default_user_image = false;
    bool geo_enabled = false;

    bool operator==(const UserProfile&) const = default;
};

struct Tweet {
    TweetId tweet_id = 0;
    UserProfile author;
    Timestamp created_at{};
    std::string text;
    std::vector<std::string> hashtags;  // lowercase, no '#'
    std::vector<std::string> urls;
    std::vector<std::string> media_ids;
    std::vector<UserId> mentions;
    std::string client_source;
    TweetType tweet_type = TweetType::Original;
    std::optional<TweetId> referenced_tweet_id;
    std::optional<UserId> referenced_author_id;
    std::optional<std::string> lang;

    UserId author_id() const { return author.user_id; }

    bool operator==(const Tweet&) const = default;
};

// All tweets of one account sorted ascending by (created_at, tweet_id), plus
// the profile snapshot of the latest tweet.
struct UserTimeline {
    UserProfile profile;
    std::vector<Tweet> tweets;
    bool operator==(const UserTimeline&) const = default;
};

}  // namespace astroturf
