#include "astroturf/trolls.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "astroturf/csv.hpp"
#include "astroturf/error.hpp"
#include "astroturf/text.hpp"

namespace astroturf::trolls {

bool TrollList::contains(UserId id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), id,
                               [](const TrollEntry& e, UserId v) { return e.user_id < v; });
    return it != entries.end() && it->user_id == id;
}

namespace {

std::size_t find_column(const csv::Table& t, std::initializer_list<std::string_view> names,
                        std::string_view role) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        std::string h = text::to_lower(text::trim(t.header[i]));
        for (auto n : names) {
            if (h == n) return i;
        }
    }
    throw DataError("troll list: missing " + std::string(role) + " column");
}

TrollList from_table(const csv::Table& t) {
    if (t.header.empty()) throw DataError("troll list: missing header");
    const std::size_t id_col = find_column(t, {"user_id", "userid", "id"}, "user_id");
    const std::size_t name_col = find_column(t, {"screen_name", "user_screen_name", "screenname"}, "screen_name");
    std::map<UserId, std::vector<std::string>> merged;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() <= std::max(id_col, name_col)) {
            throw DataError("troll list: row " + std::to_string(r + 2) + " has too few columns");
        }
        std::string id_text = text::trim(row[id_col]);
        UserId id = 0;
        auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec != std::errc() || p != id_text.data() + id_text.size() || id_text.empty()) {
            throw DataError("troll list: row " + std::to_string(r + 2) + " has invalid user_id '" + id_text + "'");
        }
        auto& names = merged[id];
        std::string name = text::trim(row[name_col]);
        if (!name.empty() && std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    TrollList list;
    for (auto& [id, names] : merged) list.entries.push_back({id, std::move(names)});
    return list;
}

}  // namespace

TrollList troll_list_from_csv(std::string_view content) { return from_table(csv::parse(content)); }

TrollList load_troll_list(const std::filesystem::path& path) {
    try {
        return from_table(csv::read(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<UserId> TrollMatchReport::matched_ids() const {
    std::vector<UserId> ids;
    for (const auto& a : matched_accounts) ids.push_back(a.user_id);
    return ids;
}

TrollMatchReport match_trolls(const Store& store, const TrollList& list) {
    TrollMatchReport report;
    report.list_size = list.entries.size();
    for (const auto& entry : list.entries) {
        const auto* tl = store.find(entry.user_id);
        if (!tl) {
            ++report.unmatched;
            continue;
        }
        MatchedAccount acc;
        acc.user_id = entry.user_id;
        acc.screen_name = tl->profile.screen_name;
        acc.account_created_at = tl->profile.account_created_at;
        const auto& names = entry.known_screen_names;
        acc.renamed = std::find(names.begin(), names.end(), acc.screen_name) == names.end();
        for (const auto& t : tl->tweets) {
            ++acc.tweets_total;
            switch (t.tweet_type) {
                case TweetType::Original: ++acc.originals; break;
                case TweetType::Retweet: ++acc.retweets; break;
                case TweetType::Quote: ++acc.quotes; break;
                case TweetType::Reply: ++acc.replies; break;
            }
            ++report.activity_series[format_day(t.created_at)];
        }
        ++report.creation_histogram[format_month(acc.account_created_at)];
        report.matched_accounts.push_back(std::move(acc));
    }
    report.interaction = troll_interactions(store, report.matched_ids());
    return report;
}

InteractionStats troll_interactions(const Store& store, const std::vector<UserId>& matched) {
    const std::set<UserId> trolls(matched.begin(), matched.end());
    InteractionStats s;
    store.for_each_tweet([&](const Tweet& t) {
        const bool by_troll = trolls.count(t.author_id()) > 0;
        if (by_troll && t.tweet_type == TweetType::Retweet) ++s.retweets_by_trolls;
        if (!t.referenced_author_id || !trolls.count(*t.referenced_author_id)) return;
        if (t.tweet_type == TweetType::Retweet) {
            ++(by_troll ? s.retweets_of_trolls_by_trolls : s.retweets_of_trolls_by_others);
        } else if (t.tweet_type == TweetType::Quote) {
            ++(by_troll ? s.quotes_of_trolls_by_trolls : s.quotes_of_trolls_by_others);
        }
    });
    return s;
}

}  // namespace astroturf::trolls
