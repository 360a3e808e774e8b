#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "astroturf/store.hpp"

namespace astroturf::trolls {

struct TrollEntry {
    UserId user_id = 0;
    std::vector<std::string> known_screen_names;
};

struct TrollList {
    std::vector<TrollEntry> entries;  // unique ids, ascending

    bool contains(UserId id) const;
};

// Two-column CSV. Accepted header spellings:
//   id column:   user_id | userid | id
//   name column: screen_name | user_screen_name | screenname
// Several rows per id are merged; names keep first-seen order.
TrollList load_troll_list(const std::filesystem::path& path);
TrollList troll_list_from_csv(std::string_view content);

struct InteractionStats {
    std::uint64_t retweets_of_trolls_by_trolls = 0;
    std::uint64_t retweets_of_trolls_by_others = 0;
    std::uint64_t quotes_of_trolls_by_trolls = 0;
    std::uint64_t quotes_of_trolls_by_others = 0;
    std::uint64_t retweets_by_trolls = 0;  // every retweet posted by a matched account

    std::uint64_t troll_tweets_retweeted() const {
        return retweets_of_trolls_by_trolls + retweets_of_trolls_by_others;
    }
    bool operator==(const InteractionStats&) const = default;
};

struct MatchedAccount {
    UserId user_id = 0;
    std::string screen_name;  // latest in the store
    std::uint64_t tweets_total = 0;
    std::uint64_t originals = 0;
    std::uint64_t retweets = 0;
    std::uint64_t quotes = 0;
    std::uint64_t replies = 0;
    bool renamed = false;
    Timestamp account_created_at{};
};

struct TrollMatchReport {
    std::size_t list_size = 0;
    std::vector<MatchedAccount> matched_accounts;  // ascending id
    std::size_t unmatched = 0;
    std::map<std::string, std::uint64_t> creation_histogram;  // "YYYY-MM" -> accounts
    std::map<std::string, std::uint64_t> activity_series;     // "YYYY-MM-DD" -> tweets
    InteractionStats interaction;

    std::vector<UserId> matched_ids() const;
};

// Matching is by user id only. An account counts as renamed when its latest
// screen name is not among the list's known names for that id.
TrollMatchReport match_trolls(const Store& store, const TrollList& list);

// Retweets and quotes of matched accounts' tweets, split by whether the
// interacting account is itself matched.
InteractionStats troll_interactions(const Store& store, const std::vector<UserId>& matched);

}  // namespace astroturf::trolls
