#include "astroturf/features.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "astroturf/csv.hpp"
#include "astroturf/error.hpp"
#include "astroturf/parallel.hpp"
#include "astroturf/text.hpp"

namespace astroturf::features {

const std::array<std::string_view, kFeatureCount>& feature_names() {
    static const std::array<std::string_view, kFeatureCount> names = {
        // metadata
        "avg_tweets_per_day", "total_tweets", "orig_ratio", "retweet_ratio", "quote_ratio",
        "reply_ratio", "twitter_client", "official_client", "total_clients",
        "unique_users_retweet_ratio", "unique_users_quotes_ratio", "unique_users_reply_ratio",
        "longest_conversation", "unique_users_conv_ratio",
        // text
        "avg_text_len", "std_text_len", "url_ratio", "unique_url_ratio", "unique_url_host_ratio",
        "vocabulary_diversity", "mentions_ratio", "hashtags_ratio", "unique_mentions_ratio",
        "unique_hashtags_ratio", "ending_hashtags_ratio", "starting_mention_ratio",
        "starting_rt_ratio", "zip_ratio", "user_simhash", "avg_duplicate_simhash",
        "duplicate_simhash_ratio",
        // time
        "chi_square_seconds", "avg_longest_break", "avg_second_longest_break", "median_retweet",
        "median_quote",
        // user
        "total_friends", "total_followers", "friend_follower_ratio", "has_default_profile_image",
        "has_default_user_image", "is_verified", "has_geo_coordinates", "self_bot"};
    return names;
}

const std::vector<std::string>& column_names() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> out;
        for (auto name : feature_names()) {
            if (name == "twitter_client") {
                for (std::size_t b = 0; b < kClientBuckets; ++b) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "twitter_client_%02zu", b);
                    out.emplace_back(buf);
                }
            } else {
                out.emplace_back(name);
            }
        }
        return out;
    }();
    return cols;
}

const std::vector<Column>& ratio_columns() {
    static const std::vector<Column> cols = {
        orig_ratio, retweet_ratio, quote_ratio, reply_ratio, unique_users_retweet_ratio,
        unique_users_quotes_ratio, unique_users_reply_ratio, unique_users_conv_ratio, url_ratio,
        unique_url_ratio, unique_url_host_ratio, vocabulary_diversity, mentions_ratio,
        hashtags_ratio, unique_mentions_ratio, unique_hashtags_ratio, ending_hashtags_ratio,
        starting_mention_ratio, starting_rt_ratio, user_simhash, duplicate_simhash_ratio,
        friend_follower_ratio};
    return cols;
}

const std::vector<Column>& boolean_columns() {
    static const std::vector<Column> cols = {official_client, has_default_profile_image,
                                             has_default_user_image, is_verified,
                                             has_geo_coordinates, self_bot};
    return cols;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double hours_between(Timestamp later, Timestamp earlier) {
    return static_cast<double>(to_unix(later) - to_unix(earlier)) / kSecondsPerHour;
}

std::int64_t day_index(Timestamp t) { return to_unix(floor_day(t)) / kSecondsPerDay; }

// Client tokens of one account: every tweet's client name contributes its tokens.
std::vector<std::string> client_tokens(const UserTimeline& tl) {
    std::vector<std::string> tokens;
    for (const auto& t : tl.tweets) {
        for (auto& tok : text::tokenize(client_name(t.client_source))) tokens.push_back(std::move(tok));
    }
    return tokens;
}

}  // namespace

double CorpusStats::span_days() const {
    return std::max(1.0, static_cast<double>(to_unix(span_end) - to_unix(span_start)) / kSecondsPerDay);
}

CorpusStats build_corpus_stats(const Store& store) {
    CorpusStats cs;
    cs.accounts = store.user_count();
    bool first = true;
    std::map<std::int64_t, std::map<std::string, std::uint64_t>> daily_tags;
    store.for_each_tweet([&](const Tweet& t) {
        if (first || t.created_at < cs.span_start) cs.span_start = t.created_at;
        if (first || t.created_at > cs.span_end) cs.span_end = t.created_at;
        first = false;
        CorpusStats::TweetRef ref{t.created_at, t.author_id(), t.tweet_type, std::nullopt};
        if (t.tweet_type == TweetType::Reply) ref.parent = t.referenced_tweet_id;
        cs.tweets.emplace(t.tweet_id, ref);
        auto& tags = daily_tags[day_index(t.created_at)];
        for (const auto& h : t.hashtags) ++tags[h];
    });
    for (const auto& [id, tl] : store.timelines()) {
        auto tokens = client_tokens(tl);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (const auto& tok : tokens) ++cs.client_document_frequency[tok];
    }
    std::vector<double> rt_hours;
    std::vector<double> qt_hours;
    store.for_each_tweet([&](const Tweet& t) {
        if ((t.tweet_type != TweetType::Retweet && t.tweet_type != TweetType::Quote) || !t.referenced_tweet_id) return;
        auto it = cs.tweets.find(*t.referenced_tweet_id);
        if (it == cs.tweets.end()) return;
        (t.tweet_type == TweetType::Retweet ? rt_hours : qt_hours).push_back(hours_between(t.created_at, it->second.created_at));
    });
    if (!rt_hours.empty()) cs.median_retweet_hours = median_of(std::move(rt_hours));
    if (!qt_hours.empty()) cs.median_quote_hours = median_of(std::move(qt_hours));
    for (const auto& [day, counts] : daily_tags) {
        std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        auto& top = cs.trending[day];
        for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) top.insert(ranked[i].first);
    }
    return cs;
}

std::string client_name(std::string_view source) {
    std::string out;
    bool in_tag = false;
    for (char c : source) {
        if (c == '<') {
            in_tag = true;
        } else if (c == '>') {
            in_tag = false;
        } else if (!in_tag) {
            out += c;
        }
    }
    return text::trim(out);
}

bool is_official_client(std::string_view name) {
    static const std::set<std::string, std::less<>> official = {
        "Twitter Web Client", "Twitter Web App", "Twitter for iPhone", "Twitter for Android",
        "Twitter for iPad",   "Twitter for Mac", "Twitter Lite",       "TweetDeck",
        "Twitter for Windows"};
    return official.count(name) > 0;
}

std::uint64_t simhash64(std::string_view s) {
    std::array<int, 64> votes{};
    bool any = false;
    for (const auto& tok : text::tokenize(s)) {
        any = true;
        const std::uint64_t h = text::fnv1a64(tok);
        for (int b = 0; b < 64; ++b) votes[b] += ((h >> b) & 1U) ? 1 : -1;
    }
    if (!any) return 0;
    std::uint64_t fp = 0;
    for (int b = 0; b < 64; ++b) {
        if (votes[b] > 0) fp |= (1ULL << b);
    }
    return fp;
}

int hamming(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

double seconds_chi_square(std::span<const Timestamp> timestamps) {
    if (timestamps.empty()) return 0.0;
    std::array<std::uint64_t, 60> counts{};
    for (auto t : timestamps) {
        auto s = to_unix(t) % 60;
        if (s < 0) s += 60;
        ++counts[static_cast<std::size_t>(s)];
    }
    const double expected = static_cast<double>(timestamps.size()) / 60.0;
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

std::pair<double, double> longest_breaks(std::span<const Timestamp> ts, std::int64_t window) {
    if (ts.empty()) throw InvalidArgument("longest_breaks needs at least one timestamp");
    if (window <= 0) throw InvalidArgument("window must be positive");
    const std::int64_t first = to_unix(ts.front());
    const std::int64_t last = to_unix(ts.back());
    if (last == first) return {static_cast<double>(window), static_cast<double>(window)};

    double sum_longest = 0.0;
    double sum_second = 0.0;
    std::size_t windows = 0;
    std::size_t idx = 0;
    for (std::int64_t start = first; start < last; start += window) {
        const std::int64_t end = std::min(start + window, last);
        const bool final_window = end == last;
        std::int64_t prev = start;
        std::int64_t longest = 0;
        std::int64_t second = 0;
        auto push_gap = [&](std::int64_t gap) {
            if (gap > longest) {
                second = longest;
                longest = gap;
            } else if (gap > second) {
                second = gap;
            }
        };
        std::size_t gaps = 0;
        while (idx < ts.size()) {
            const std::int64_t t = to_unix(ts[idx]);
            if (t > end || (t == end && !final_window)) break;
            push_gap(t - prev);
            ++gaps;
            prev = t;
            ++idx;
        }
        push_gap(end - prev);
        ++gaps;
        if (gaps < 2) second = 0;
        sum_longest += static_cast<double>(longest);
        sum_second += static_cast<double>(second);
        ++windows;
    }
    return {sum_longest / static_cast<double>(windows), sum_second / static_cast<double>(windows)};
}

double compression_ratio(std::span<const std::string> texts) {
    std::string joined;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (i) joined += '\n';
        joined += texts[i];
    }
    if (joined.empty()) return 1.0;
    uLongf bound = compressBound(static_cast<uLong>(joined.size()));
    std::vector<Bytef> buf(bound);
    int rc = compress2(buf.data(), &bound, reinterpret_cast<const Bytef*>(joined.data()),
                       static_cast<uLong>(joined.size()), 6);
    if (rc != Z_OK) throw std::runtime_error("zlib compress2 failed");
    return static_cast<double>(bound) / static_cast<double>(joined.size());
}

namespace {

struct ConversationStats {
    std::uint64_t longest = 0;
    std::size_t partners = 0;
};

// Walks each reply up its in-corpus parent chain while authorship alternates
// between the account and a single partner.
ConversationStats conversations(UserId self, const std::vector<const Tweet*>& tweets,
                                const CorpusStats& corpus) {
    constexpr std::size_t kMaxChain = 100000;
    ConversationStats out;
    std::set<UserId> partners;
    for (const Tweet* t : tweets) {
        if (t->tweet_type != TweetType::Reply || !t->referenced_tweet_id) continue;
        std::optional<UserId> partner;
        UserId current_author = self;
        std::optional<TweetId> parent_id = t->referenced_tweet_id;
        std::uint64_t length = 0;
        for (std::size_t step = 0; step < kMaxChain && parent_id; ++step) {
            auto it = corpus.tweets.find(*parent_id);
            if (it == corpus.tweets.end()) break;
            const auto& parent = it->second;
            if (!partner) {
                if (parent.author == self) break;
                partner = parent.author;
            }
            const UserId expected = current_author == self ? *partner : self;
            if (parent.author != expected) break;
            ++length;
            if (parent.type != TweetType::Reply) break;
            current_author = parent.author;
            parent_id = parent.parent;
        }
        if (length > 0) {
            partners.insert(*partner);
            out.longest = std::max(out.longest, length);
        }
    }
    out.partners = partners.size();
    return out;
}

bool ends_with_hashtag(std::string_view raw) {
    std::string s = text::trim(raw);
    auto pos = s.find_last_of(" \t\n\r");
    std::string_view last = pos == std::string::npos ? std::string_view(s) : std::string_view(s).substr(pos + 1);
    return last.size() >= 2 && last.front() == '#';
}

bool starts_with_mention(std::string_view raw) {
    std::string s = text::trim(raw);
    return s.size() >= 2 && s.front() == '@';
}

bool starts_with_rt(std::string_view raw) {
    std::string s = text::trim(raw);
    if (s.rfind("RT", 0) != 0) return false;
    return s.size() == 2 || s[2] == ' ' || s[2] == ':' || s[2] == '\t';
}

// Tweets that introduce at least one value not seen in an earlier tweet.
template <typename Values>
std::size_t introducing_tweets(const std::vector<const Tweet*>& tweets, Values&& values_of) {
    std::set<std::string> seen;
    std::size_t n = 0;
    for (const Tweet* t : tweets) {
        bool fresh = false;
        for (auto&& v : values_of(*t)) {
            if (seen.insert(v).second) fresh = true;
        }
        n += fresh;
    }
    return n;
}

}  // namespace

FeatureVector extract_features(const UserTimeline& timeline, const UserProfile& profile,
                               const CorpusStats& corpus) {
    if (timeline.tweets.empty()) throw InvalidArgument("cannot extract features from an empty timeline");
    std::vector<const Tweet*> tweets;
    tweets.reserve(timeline.tweets.size());
    for (const auto& t : timeline.tweets) tweets.push_back(&t);
    std::sort(tweets.begin(), tweets.end(), [](const Tweet* a, const Tweet* b) {
        return a->created_at != b->created_at ? a->created_at < b->created_at : a->tweet_id < b->tweet_id;
    });

    FeatureVector f{};
    const double n = static_cast<double>(tweets.size());
    const UserId self = profile.user_id;

    // metadata
    f[avg_tweets_per_day] = n / corpus.span_days();
    f[total_tweets] = n;
    std::array<std::size_t, 4> type_counts{};
    std::set<UserId> rt_users, qt_users, reply_users;
    std::set<std::string> clients;
    bool official = false;
    for (const Tweet* t : tweets) {
        ++type_counts[static_cast<std::size_t>(t->tweet_type)];
        if (t->referenced_author_id) {
            if (t->tweet_type == TweetType::Retweet) rt_users.insert(*t->referenced_author_id);
            if (t->tweet_type == TweetType::Quote) qt_users.insert(*t->referenced_author_id);
            if (t->tweet_type == TweetType::Reply) reply_users.insert(*t->referenced_author_id);
        }
        std::string client = client_name(t->client_source);
        official = official || is_official_client(client);
        if (!client.empty()) clients.insert(std::move(client));
    }
    f[orig_ratio] = static_cast<double>(type_counts[0]) / n;
    f[retweet_ratio] = static_cast<double>(type_counts[1]) / n;
    f[quote_ratio] = static_cast<double>(type_counts[2]) / n;
    f[reply_ratio] = static_cast<double>(type_counts[3]) / n;

    {
        std::map<std::string, std::size_t> tf;
        std::size_t total = 0;
        for (const Tweet* t : tweets) {
            for (auto& tok : text::tokenize(client_name(t->client_source))) {
                ++tf[tok];
                ++total;
            }
        }
        std::array<double, kClientBuckets> block{};
        const double docs = static_cast<double>(std::max<std::size_t>(corpus.accounts, 1));
        for (const auto& [term, count] : tf) {
            auto it = corpus.client_document_frequency.find(term);
            const double df = it == corpus.client_document_frequency.end() ? 0.0 : static_cast<double>(it->second);
            const double idf = std::log((1.0 + docs) / (1.0 + df)) + 1.0;
            block[text::fnv1a64(term) % kClientBuckets] += static_cast<double>(count) / static_cast<double>(total) * idf;
        }
        double norm = 0.0;
        for (double v : block) norm += v * v;
        norm = std::sqrt(norm);
        for (std::size_t b = 0; b < kClientBuckets; ++b) f[twitter_client + b] = norm > 0 ? block[b] / norm : 0.0;
    }
    f[official_client] = official ? 1.0 : 0.0;
    f[total_clients] = static_cast<double>(clients.size());
    f[unique_users_retweet_ratio] = static_cast<double>(rt_users.size()) / n;
    f[unique_users_quotes_ratio] = static_cast<double>(qt_users.size()) / n;
    f[unique_users_reply_ratio] = static_cast<double>(reply_users.size()) / n;
    const auto conv = conversations(self, tweets, corpus);
    f[longest_conversation] = static_cast<double>(conv.longest);
    f[unique_users_conv_ratio] = static_cast<double>(conv.partners) / n;

    // text
    double len_sum = 0.0;
    std::vector<double> lengths;
    std::size_t with_url = 0, with_mention = 0, with_hashtag = 0;
    std::size_t ending_tag = 0, starting_mention = 0, starting_rt = 0;
    std::unordered_set<std::string> vocab;
    std::size_t token_total = 0;
    std::vector<std::string> texts;
    std::vector<std::uint64_t> fingerprints;
    for (const Tweet* t : tweets) {
        const double len = static_cast<double>(text::utf8_length(t->text));
        lengths.push_back(len);
        len_sum += len;
        with_url += !t->urls.empty();
        with_mention += !t->mentions.empty();
        with_hashtag += !t->hashtags.empty();
        ending_tag += ends_with_hashtag(t->text);
        starting_mention += starts_with_mention(t->text);
        starting_rt += starts_with_rt(t->text);
        for (auto& tok : text::tokenize(t->text)) {
            ++token_total;
            vocab.insert(std::move(tok));
        }
        texts.push_back(t->text);
        fingerprints.push_back(simhash64(t->text));
    }
    const double mean_len = len_sum / n;
    double var = 0.0;
    for (double l : lengths) var += (l - mean_len) * (l - mean_len);
    f[avg_text_len] = mean_len;
    f[std_text_len] = std::sqrt(var / n);
    f[url_ratio] = static_cast<double>(with_url) / n;
    f[unique_url_ratio] = static_cast<double>(introducing_tweets(tweets, [](const Tweet& t) { return t.urls; })) / n;
    f[unique_url_host_ratio] = static_cast<double>(introducing_tweets(tweets, [](const Tweet& t) {
                                   std::vector<std::string> hosts;
                                   for (const auto& u : t.urls) {
                                       auto h = text::url_host(u);
                                       if (!h.empty()) hosts.push_back(std::move(h));
                                   }
                                   return hosts;
                               })) / n;
    f[vocabulary_diversity] = token_total == 0 ? 1.0 : static_cast<double>(vocab.size()) / static_cast<double>(token_total);
    f[mentions_ratio] = static_cast<double>(with_mention) / n;
    f[hashtags_ratio] = static_cast<double>(with_hashtag) / n;
    f[unique_mentions_ratio] = static_cast<double>(introducing_tweets(tweets, [](const Tweet& t) {
                                   std::vector<std::string> ids;
                                   for (auto m : t.mentions) ids.push_back(std::to_string(m));
                                   return ids;
                               })) / n;
    f[unique_hashtags_ratio] = static_cast<double>(introducing_tweets(tweets, [](const Tweet& t) { return t.hashtags; })) / n;
    f[ending_hashtags_ratio] = static_cast<double>(ending_tag) / n;
    f[starting_mention_ratio] = static_cast<double>(starting_mention) / n;
    f[starting_rt_ratio] = static_cast<double>(starting_rt) / n;
    f[zip_ratio] = compression_ratio(texts);
    {
        std::string joined;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (i) joined += '\n';
            joined += texts[i];
        }
        f[user_simhash] = static_cast<double>(simhash64(joined)) * 0x1.0p-64;
    }
    {
        std::vector<std::size_t> similar(fingerprints.size(), 0);
        for (std::size_t i = 0; i < fingerprints.size(); ++i) {
            for (std::size_t j = i + 1; j < fingerprints.size(); ++j) {
                if (hamming(fingerprints[i], fingerprints[j]) <= kSimilarHamming) {
                    ++similar[i];
                    ++similar[j];
                }
            }
        }
        double sum = 0.0;
        std::size_t with_sibling = 0;
        for (auto s : similar) {
            sum += static_cast<double>(s);
            with_sibling += s > 0;
        }
        f[avg_duplicate_simhash] = sum / n;
        f[duplicate_simhash_ratio] = static_cast<double>(with_sibling) / n;
    }

    // time
    std::vector<Timestamp> stamps;
    for (const Tweet* t : tweets) stamps.push_back(t->created_at);
    f[chi_square_seconds] = seconds_chi_square(stamps);
    const auto [longest, second] = longest_breaks(stamps);
    f[avg_longest_break] = longest / kSecondsPerHour;
    f[avg_second_longest_break] = second / kSecondsPerHour;
    std::vector<double> rt_delay, qt_delay;
    for (const Tweet* t : tweets) {
        if ((t->tweet_type != TweetType::Retweet && t->tweet_type != TweetType::Quote) || !t->referenced_tweet_id) continue;
        auto it = corpus.tweets.find(*t->referenced_tweet_id);
        if (it == corpus.tweets.end()) continue;
        (t->tweet_type == TweetType::Retweet ? rt_delay : qt_delay).push_back(hours_between(t->created_at, it->second.created_at));
    }
    f[median_retweet] = rt_delay.empty() ? corpus.median_retweet_hours : median_of(std::move(rt_delay));
    f[median_quote] = qt_delay.empty() ? corpus.median_quote_hours : median_of(std::move(qt_delay));

    // user
    const double friends = static_cast<double>(profile.friends);
    const double followers = static_cast<double>(profile.followers);
    f[total_friends] = friends;
    f[total_followers] = followers;
    f[friend_follower_ratio] = friends + followers > 0 ? friends / (friends + followers) : 0.0;
    f[has_default_profile_image] = profile.default_profile_image;
    f[has_default_user_image] = profile.default_user_image;
    f[is_verified] = profile.verified;
    f[has_geo_coordinates] = profile.geo_enabled;
    const std::string names = text::to_lower(profile.screen_name) + "\n" + text::to_lower(profile.display_name);
    f[self_bot] = names.find("bot") != std::string::npos ? 1.0 : 0.0;
    return f;
}

FeatureTable extract_all(const Store& store, const CorpusStats& corpus, std::size_t min_tweets,
                         unsigned threads) {
    std::vector<const UserTimeline*> selected;
    FeatureTable table;
    for (const auto& [id, tl] : store.timelines()) {
        if (!tl.tweets.empty() && tl.tweets.size() >= min_tweets) {
            selected.push_back(&tl);
            table.ids.push_back(id);
        }
    }
    table.rows.resize(selected.size());
    parallel_for(selected.size(), threads, [&](std::size_t i) {
        table.rows[i] = extract_features(*selected[i], selected[i]->profile, corpus);
    });
    return table;
}

void write_csv(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    csv::Row header{"user_id"};
    for (const auto& c : column_names()) header.push_back(c);
    csv::write_row(out, header);
    for (std::size_t r = 0; r < table.ids.size(); ++r) {
        csv::Row row{std::to_string(table.ids[r])};
        for (double v : table.rows[r]) row.push_back(csv::number(v));
        csv::write_row(out, row);
    }
    if (!out) throw DataError("write failed: " + path.string());
}

namespace {

double parse_double(const std::string& s, const std::filesystem::path& path) {
    if (s.empty() || s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw DataError(path.string() + ": bad number '" + s + "'");
    return v;
}

UserId parse_id(const std::string& s, const std::filesystem::path& path) {
    UserId v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
        throw DataError(path.string() + ": bad user_id '" + s + "'");
    }
    return v;
}

}  // namespace

FeatureTable read_csv(const std::filesystem::path& path) {
    auto t = csv::read(path);
    const std::size_t id_col = t.column("user_id", path);
    std::vector<std::size_t> cols;
    for (const auto& name : column_names()) cols.push_back(t.column(name, path));
    FeatureTable table;
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw DataError(path.string() + ": ragged row");
        table.ids.push_back(parse_id(row[id_col], path));
        FeatureVector v{};
        for (std::size_t c = 0; c < cols.size(); ++c) v[c] = parse_double(row[cols[c]], path);
        table.rows.push_back(v);
    }
    return table;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Bot: return "bot";
        case Verdict::Human: return "human";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

double trending_url_ratio(const UserTimeline& timeline, const CorpusStats& corpus) {
    if (timeline.tweets.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& t : timeline.tweets) {
        if (t.urls.empty()) continue;
        auto it = corpus.trending.find(day_index(t.created_at));
        if (it == corpus.trending.end()) continue;
        std::set<std::string> tags(t.hashtags.begin(), t.hashtags.end());
        std::size_t trending = 0;
        for (const auto& h : tags) trending += it->second.count(h);
        hits += trending >= 2;
    }
    return static_cast<double>(hits) / static_cast<double>(timeline.tweets.size());
}

LabelSuggestion suggest_labels(UserId account, const FeatureVector& f, std::optional<double> trending_ratio) {
    LabelSuggestion s;
    s.account = account;
    bool bot = false;
    bool human = false;
    if (f[duplicate_simhash_ratio] >= 0.5) {
        s.fired_rules.emplace_back("R1");
        bot = true;
    }
    if (f[avg_longest_break] < 4.0 && f[total_tweets] >= 200) {
        s.fired_rules.emplace_back("R2");
        bot = true;
    }
    if (trending_ratio && *trending_ratio >= 0.3) {
        s.fired_rules.emplace_back("R3");
        bot = true;
    }
    if (f[avg_longest_break] >= 6.0 && f[official_client] == 1.0 && f[duplicate_simhash_ratio] < 0.1) {
        s.fired_rules.emplace_back("H1");
        human = true;
    }
    s.verdict = bot && !human ? Verdict::Bot : (human && !bot ? Verdict::Human : Verdict::Undecided);
    return s;
}

std::map<UserId, Label> read_labels(const std::filesystem::path& path) {
    auto t = csv::read(path);
    const std::size_t id_col = t.column("user_id", path);
    const std::size_t label_col = t.column("label", path);
    std::map<UserId, Label> labels;
    for (const auto& row : t.rows) {
        if (row.size() <= std::max(id_col, label_col)) throw DataError(path.string() + ": ragged row");
        std::string l = text::to_lower(text::trim(row[label_col]));
        Label label;
        if (l == "bot" || l == "1") {
            label = Label::Bot;
        } else if (l == "human" || l == "0") {
            label = Label::Human;
        } else {
            throw DataError(path.string() + ": unknown label '" + row[label_col] + "'");
        }
        UserId id = parse_id(text::trim(row[id_col]), path);
        auto [it, inserted] = labels.emplace(id, label);
        if (!inserted && it->second != label) throw DataError(path.string() + ": conflicting labels for " + row[id_col]);
    }
    return labels;
}

void write_labels(const std::map<UserId, Label>& labels, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    csv::write_row(out, {"user_id", "label"});
    for (const auto& [id, label] : labels) {
        csv::write_row(out, {std::to_string(id), label == Label::Bot ? "bot" : "human"});
    }
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace astroturf::features
