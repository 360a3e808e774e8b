#include "astroturf/ingest.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <json.hpp>

#include "astroturf/config.hpp"
#include "astroturf/error.hpp"
#include "astroturf/text.hpp"

namespace astroturf {

using nlohmann::json;

std::string_view to_string(TweetType t) {
    switch (t) {
        case TweetType::Original: return "original";
        case TweetType::Retweet: return "retweet";
        case TweetType::Quote: return "quote";
        case TweetType::Reply: return "reply";
    }
    return "?";
}

CorpusConfig CorpusConfig::election_default() {
    CorpusConfig c;
    c.search_terms = {"afd",       "cdu",        "csu",      "fdp",  "gruene", "grüne",
                      "diegruenen", "diegrünen", "linke",    "dielinke", "npd", "spd"};
    c.exclusion_terms = {"fdp"};
    return c;
}

void CorpusConfig::validate() const {
    if (search_terms.empty()) throw DataError("search_terms must not be empty");
    for (const auto& t : search_terms) {
        if (t != text::to_lower(t)) throw DataError("search term '" + t + "' is not lowercase");
    }
    for (const auto& t : exclusion_terms) {
        if (t != text::to_lower(t)) throw DataError("exclusion term '" + t + "' is not lowercase");
    }
}

CorpusConfig CorpusConfig::load(const std::filesystem::path& path) {
    json doc = config::load_toml(path);
    CorpusConfig c = election_default();
    auto strings = [&](const char* key, std::vector<std::string>& out) {
        if (!doc.contains(key)) return;
        out.clear();
        for (const auto& v : doc.at(key)) {
            if (!v.is_string()) throw DataError(path.string() + ": " + key + " must hold strings");
            out.push_back(text::to_lower(v.get<std::string>()));
        }
    };
    strings("search_terms", c.search_terms);
    strings("exclusion_terms", c.exclusion_terms);
    if (doc.contains("match_mode")) {
        auto mode = doc.at("match_mode").get<std::string>();
        if (mode == "token") {
            c.match_mode = MatchMode::Token;
        } else if (mode == "substring") {
            c.match_mode = MatchMode::Substring;
        } else {
            throw DataError(path.string() + ": match_mode must be 'token' or 'substring'");
        }
    }
    c.validate();
    return c;
}

namespace {

std::uint64_t read_id(const json& v, const char* what) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec == std::errc() && p == s.data() + s.size() && !s.empty()) return out;
    }
    throw ParseError(std::string("invalid identifier in ") + what, 0);
}

std::optional<std::uint64_t> optional_id(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return read_id(*it, key);
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) throw ParseError(std::string("missing field '") + key + "'", 0);
    return *it;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    return it->get<T>();
}

// Reference (id, user.id) from a nested status object.
std::pair<std::optional<TweetId>, std::optional<UserId>> status_ref(const json& status) {
    std::optional<TweetId> id;
    std::optional<UserId> user;
    if (auto it = status.find("id"); it != status.end() && !it->is_null()) id = read_id(*it, "status id");
    if (auto it = status.find("user"); it != status.end() && it->is_object()) user = optional_id(*it, "id");
    return {id, user};
}

Tweet from_json(const json& j) {
    Tweet t;
    t.tweet_id = read_id(require(j, "id"), "id");
    const json& user = require(j, "user");
    if (!user.is_object()) throw ParseError("field 'user' is not an object", 0);
    t.author.user_id = read_id(require(user, "id"), "user.id");
    t.author.screen_name = require(user, "screen_name").get<std::string>();
    t.author.display_name = get_or<std::string>(user, "name", "");
    if (auto it = user.find("created_at"); it != user.end() && it->is_string()) {
        auto ts = parse_timestamp(it->get_ref<const std::string&>());
        if (!ts) throw ParseError("unparseable user.created_at", 0);
        t.author.account_created_at = *ts;
    }
    t.author.followers = get_or<std::uint64_t>(user, "followers_count", 0);
    t.author.friends = get_or<std::uint64_t>(user, "friends_count", 0);
    t.author.verified = get_or<bool>(user, "verified", false);
    t.author.default_profile_image = get_or<bool>(user, "default_profile_image", false);
    t.author.default_user_image = get_or<bool>(user, "default_profile", false);
    t.author.geo_enabled = get_or<bool>(user, "geo_enabled", false);

    const json& created = require(j, "created_at");
    if (!created.is_string()) throw ParseError("field 'created_at' is not a string", 0);
    auto ts = parse_timestamp(created.get_ref<const std::string&>());
    if (!ts) throw ParseError("unparseable created_at", 0);
    t.created_at = *ts;

    if (auto it = j.find("full_text"); it != j.end() && it->is_string()) {
        t.text = it->get<std::string>();
    } else {
        t.text = require(j, "text").get<std::string>();
    }

    bool hashtags_from_entities = false;
    if (auto ent = j.find("entities"); ent != j.end() && ent->is_object()) {
        if (auto h = ent->find("hashtags"); h != ent->end() && h->is_array()) {
            hashtags_from_entities = true;
            for (const auto& tag : *h) {
                std::string s = tag.is_string() ? tag.get<std::string>() : tag.at("text").get<std::string>();
                if (!s.empty() && s.front() == '#') s.erase(0, 1);
                t.hashtags.push_back(text::to_lower(s));
            }
        }
        if (auto u = ent->find("urls"); u != ent->end() && u->is_array()) {
            for (const auto& url : *u) {
                if (url.is_string()) {
                    t.urls.push_back(url.get<std::string>());
                } else if (url.contains("expanded_url") && url["expanded_url"].is_string()) {
                    t.urls.push_back(url["expanded_url"].get<std::string>());
                } else {
                    t.urls.push_back(url.at("url").get<std::string>());
                }
            }
        }
        if (auto m = ent->find("media"); m != ent->end() && m->is_array()) {
            for (const auto& media : *m) {
                if (media.contains("id_str")) {
                    t.media_ids.push_back(media["id_str"].get<std::string>());
                } else {
                    const auto& id = media.at("id");
                    t.media_ids.push_back(id.is_string() ? id.get<std::string>() : std::to_string(read_id(id, "media id")));
                }
            }
        }
        if (auto m = ent->find("user_mentions"); m != ent->end() && m->is_array()) {
            for (const auto& mention : *m) t.mentions.push_back(read_id(mention.at("id"), "mention id"));
        }
    }
    if (!hashtags_from_entities) t.hashtags = text::extract_hashtags(t.text);

    t.client_source = get_or<std::string>(j, "source", "");
    if (auto it = j.find("lang"); it != j.end() && it->is_string()) t.lang = it->get<std::string>();

    auto rt = j.find("retweeted_status");
    auto qt = j.find("quoted_status");
    auto reply_to = optional_id(j, "in_reply_to_status_id");
    if (rt != j.end() && rt->is_object()) {
        t.tweet_type = TweetType::Retweet;
        std::tie(t.referenced_tweet_id, t.referenced_author_id) = status_ref(*rt);
    } else if (qt != j.end() && qt->is_object()) {
        t.tweet_type = TweetType::Quote;
        std::tie(t.referenced_tweet_id, t.referenced_author_id) = status_ref(*qt);
    } else if (reply_to) {
        t.tweet_type = TweetType::Reply;
        t.referenced_tweet_id = reply_to;
        t.referenced_author_id = optional_id(j, "in_reply_to_user_id");
    }
    return t;
}

}  // namespace

Tweet parse_tweet(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed record: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ParseError("record is not an object", 0);
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field type: ") + e.what(), 0);
    }
}

std::string serialize_tweet(const Tweet& t) {
    json user = {{"id", t.author.user_id},
                 {"screen_name", t.author.screen_name},
                 {"name", t.author.display_name},
                 {"created_at", format_timestamp(t.author.account_created_at)},
                 {"followers_count", t.author.followers},
                 {"friends_count", t.author.friends},
                 {"verified", t.author.verified},
                 {"default_profile_image", t.author.default_profile_image},
                 {"default_profile", t.author.default_user_image},
                 {"geo_enabled", t.author.geo_enabled}};
    json hashtags = json::array();
    for (const auto& h : t.hashtags) hashtags.push_back({{"text", h}});
    json urls = json::array();
    for (const auto& u : t.urls) urls.push_back({{"expanded_url", u}});
    json media = json::array();
    for (const auto& m : t.media_ids) media.push_back({{"id_str", m}});
    json mentions = json::array();
    for (auto m : t.mentions) mentions.push_back({{"id", m}});

    json j = {{"id", t.tweet_id},
              {"user", std::move(user)},
              {"created_at", format_timestamp(t.created_at)},
              {"text", t.text},
              {"source", t.client_source},
              {"entities",
               {{"hashtags", std::move(hashtags)},
                {"urls", std::move(urls)},
                {"media", std::move(media)},
                {"user_mentions", std::move(mentions)}}}};
    if (t.lang) j["lang"] = *t.lang;

    auto ref = [&] {
        json r = json::object();
        if (t.referenced_tweet_id) r["id"] = *t.referenced_tweet_id;
        if (t.referenced_author_id) r["user"] = {{"id", *t.referenced_author_id}};
        return r;
    };
    switch (t.tweet_type) {
        case TweetType::Retweet: j["retweeted_status"] = ref(); break;
        case TweetType::Quote: j["quoted_status"] = ref(); break;
        case TweetType::Reply:
            j["in_reply_to_status_id"] = t.referenced_tweet_id.value_or(0);
            if (t.referenced_author_id) j["in_reply_to_user_id"] = *t.referenced_author_id;
            break;
        case TweetType::Original: break;
    }
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

bool matches_terms(const Tweet& tweet, const std::vector<std::string>& terms, MatchMode mode) {
    if (terms.empty()) return false;
    for (const auto& h : tweet.hashtags) {
        if (std::find(terms.begin(), terms.end(), h) != terms.end()) return true;
    }
    if (mode == MatchMode::Substring) {
        std::string lowered = text::to_lower(tweet.text);
        return std::any_of(terms.begin(), terms.end(),
                           [&](const std::string& t) { return lowered.find(t) != std::string::npos; });
    }
    for (const auto& tok : text::tokenize(tweet.text)) {
        if (std::find(terms.begin(), terms.end(), tok) != terms.end()) return true;
    }
    return false;
}

ExclusionStats apply_exclusion(std::vector<Tweet>& tweets, const CorpusConfig& config) {
    ExclusionStats stats;
    stats.total = tweets.size();
    if (!config.exclusion_terms.empty()) {
        std::erase_if(tweets, [&](const Tweet& t) {
            return matches_terms(t, config.exclusion_terms, config.match_mode);
        });
    }
    stats.kept = tweets.size();
    stats.excluded = stats.total - stats.kept;
    return stats;
}

std::uint64_t build_timelines(std::vector<Tweet> tweets, std::map<UserId, UserTimeline>& out) {
    std::sort(tweets.begin(), tweets.end(),
              [](const Tweet& a, const Tweet& b) { return a.tweet_id < b.tweet_id; });
    std::uint64_t duplicates = 0;
    std::vector<Tweet> unique;
    unique.reserve(tweets.size());
    for (std::size_t i = 0; i < tweets.size();) {
        std::size_t j = i + 1;
        while (j < tweets.size() && tweets[j].tweet_id == tweets[i].tweet_id) ++j;
        std::size_t best = i;
        if (j - i > 1) {
            std::string best_repr = serialize_tweet(tweets[i]);
            for (std::size_t k = i + 1; k < j; ++k) {
                std::string repr = serialize_tweet(tweets[k]);
                if (repr < best_repr) {
                    best_repr = std::move(repr);
                    best = k;
                }
            }
            duplicates += j - i - 1;
        }
        unique.push_back(std::move(tweets[best]));
        i = j;
    }
    for (auto& t : unique) {
        UserId id = t.author_id();
        out[id].tweets.push_back(std::move(t));
    }
    for (auto& [id, tl] : out) {
        std::sort(tl.tweets.begin(), tl.tweets.end(), [](const Tweet& a, const Tweet& b) {
            return a.created_at != b.created_at ? a.created_at < b.created_at : a.tweet_id < b.tweet_id;
        });
        if (!tl.tweets.empty()) tl.profile = tl.tweets.back().author;
    }
    return duplicates;
}

IngestResult ingest_files(const std::vector<std::filesystem::path>& inputs, const CorpusConfig& config) {
    config.validate();
    IngestResult result;
    auto& stats = result.stats;
    std::vector<Tweet> on_topic;
    std::string line;
    for (const auto& path : inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DataError("cannot open input " + path.string());
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (text::trim(line).empty()) continue;
            ++stats.records;
            Tweet t;
            try {
                t = parse_tweet(line);
            } catch (const ParseError& e) {
                ++stats.rejected;
                std::string reason = e.what();
                reason = reason.substr(0, reason.find(" (at byte"));
                if (reason.rfind("malformed record", 0) == 0) reason = "malformed record";
                ++stats.rejected_by_reason[reason];
                continue;
            }
            if (!matches_terms(t, config.search_terms, config.match_mode)) {
                ++stats.off_topic;
                continue;
            }
            on_topic.push_back(std::move(t));
        }
    }
    stats.exclusion = apply_exclusion(on_topic, config);
    stats.duplicates = build_timelines(std::move(on_topic), result.timelines);
    return result;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
    glob_t g{};
    int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::filesystem::path> out;
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (out.empty()) throw DataError("no input files match '" + pattern + "'");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace astroturf
