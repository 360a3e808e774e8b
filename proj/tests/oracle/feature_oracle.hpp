#pragma once

// Naive, independent reimplementation of the 59 feature columns. Shares no
// helpers with the library beyond the Tweet record and zlib itself.

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "astroturf/tweet.hpp"

namespace oracle {

using astroturf::Tweet;
using astroturf::TweetType;
using astroturf::UserId;

inline long long unix_of(const Tweet& t) { return t.created_at.time_since_epoch().count(); }

inline bool word_byte(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

inline std::string lower(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (c >= 'A' && c <= 'Z') {
            out += static_cast<char>(c - 'A' + 'a');
        } else if (c == 0xC3 && i + 1 < s.size()) {
            unsigned char d = static_cast<unsigned char>(s[i + 1]);
            out += static_cast<char>(c);
            out += static_cast<char>((d >= 0x80 && d <= 0x9E && d != 0x97) ? d + 0x20 : d);
            ++i;
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

inline std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (word_byte(static_cast<unsigned char>(ch))) {
            cur += ch;
        } else if (!cur.empty()) {
            out.push_back(lower(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(lower(cur));
    return out;
}

inline unsigned long long fnv(const std::string& s) {
    unsigned long long h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline unsigned long long simhash(const std::string& s) {
    const auto toks = words(s);
    if (toks.empty()) return 0;
    unsigned long long out = 0;
    for (int bit = 0; bit < 64; ++bit) {
        long score = 0;
        for (const auto& t : toks) score += ((fnv(t) >> bit) & 1ULL) ? 1 : -1;
        if (score > 0) out |= 1ULL << bit;
    }
    return out;
}

inline int bits_differing(unsigned long long a, unsigned long long b) {
    int n = 0;
    for (int i = 0; i < 64; ++i) n += ((a >> i) & 1ULL) != ((b >> i) & 1ULL);
    return n;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

inline std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

inline std::string client_of(const std::string& source) {
    std::string out;
    int depth = 0;
    for (char c : source) {
        if (c == '<') depth = 1;
        else if (c == '>') depth = 0;
        else if (depth == 0) out += c;
    }
    return strip(out);
}

inline bool official(const std::string& name) {
    static const std::vector<std::string> names = {"Twitter Web Client", "Twitter Web App", "Twitter for iPhone",
                                                   "Twitter for Android", "Twitter for iPad", "Twitter for Mac",
                                                   "Twitter Lite", "TweetDeck", "Twitter for Windows"};
    return std::find(names.begin(), names.end(), name) != names.end();
}

inline std::string host_of(const std::string& url) {
    std::string rest = url;
    if (auto p = rest.find("://"); p != std::string::npos) rest = rest.substr(p + 3);
    std::string authority;
    for (char c : rest) {
        if (c == '/' || c == '?' || c == '#') break;
        authority += c;
    }
    if (auto at = authority.rfind('@'); at != std::string::npos) authority = authority.substr(at + 1);
    if (auto colon = authority.find(':'); colon != std::string::npos) authority.resize(colon);
    return lower(authority);
}

inline std::size_t code_points(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c < 0x80 || c >= 0xC0);
    return n;
}

inline double deflate_ratio(const std::string& data) {
    if (data.empty()) return 1.0;
    z_stream zs{};
    deflateInit(&zs, 6);
    std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(data.size())) + 64);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    deflate(&zs, Z_FINISH);
    const double produced = static_cast<double>(zs.total_out);
    deflateEnd(&zs);
    return produced / static_cast<double>(data.size());
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    if (v.size() % 2) return v[v.size() / 2];
    return (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2.0;
}

// Gaps between consecutive events per window; window edges count as events.
inline std::pair<double, double> breaks(const std::vector<long long>& ts, long long window) {
    if (ts.front() == ts.back()) return {static_cast<double>(window), static_cast<double>(window)};
    double a = 0, b = 0;
    int windows = 0;
    for (long long s = ts.front(); s < ts.back(); s += window) {
        const long long e = std::min(s + window, ts.back());
        std::vector<long long> ev{s, e};
        for (long long t : ts) {
            if (t >= s && t <= e) ev.push_back(t);
        }
        std::sort(ev.begin(), ev.end());
        std::vector<long long> gaps;
        for (std::size_t i = 1; i < ev.size(); ++i) gaps.push_back(ev[i] - ev[i - 1]);
        std::sort(gaps.rbegin(), gaps.rend());
        a += static_cast<double>(gaps[0]);
        b += gaps.size() > 1 ? static_cast<double>(gaps[1]) : 0.0;
        ++windows;
    }
    return {a / windows, b / windows};
}

struct Corpus {
    std::vector<Tweet> tweets;
    std::map<astroturf::TweetId, const Tweet*> by_id;
    long long first = 0, last = 0;
    std::map<std::string, int> df;
    int accounts = 0;
    double rt_median = 0, qt_median = 0;

    explicit Corpus(std::vector<Tweet> all) : tweets(std::move(all)) {
        first = last = unix_of(tweets.front());
        std::map<UserId, std::set<std::string>> tokens_of;
        for (const auto& t : tweets) {
            by_id[t.tweet_id] = &t;
            first = std::min(first, unix_of(t));
            last = std::max(last, unix_of(t));
            auto& set = tokens_of[t.author_id()];
            for (auto& w : words(client_of(t.client_source))) set.insert(w);
        }
        accounts = static_cast<int>(tokens_of.size());
        for (const auto& [_, set] : tokens_of) {
            for (const auto& w : set) ++df[w];
        }
        std::vector<double> rt, qt;
        for (const auto& t : tweets) {
            if (!t.referenced_tweet_id || !by_id.count(*t.referenced_tweet_id)) continue;
            const double h = static_cast<double>(unix_of(t) - unix_of(*by_id[*t.referenced_tweet_id])) / 3600.0;
            if (t.tweet_type == TweetType::Retweet) rt.push_back(h);
            if (t.tweet_type == TweetType::Quote) qt.push_back(h);
        }
        if (!rt.empty()) rt_median = median(rt);
        if (!qt.empty()) qt_median = median(qt);
    }
};

inline std::array<double, 59> features(const Corpus& c, UserId who) {
    std::vector<const Tweet*> tl;
    for (const auto& t : c.tweets) {
        if (t.author_id() == who) tl.push_back(&t);
    }
    std::sort(tl.begin(), tl.end(), [](const Tweet* a, const Tweet* b) {
        return unix_of(*a) != unix_of(*b) ? unix_of(*a) < unix_of(*b) : a->tweet_id < b->tweet_id;
    });
    const auto& profile = tl.back()->author;
    const double n = static_cast<double>(tl.size());
    std::array<double, 59> f{};
    int k = 0;
    auto put = [&](double v) { f[k++] = v; };

    put(n / std::max(1.0, static_cast<double>(c.last - c.first) / 86400.0));
    put(n);
    for (auto type : {TweetType::Original, TweetType::Retweet, TweetType::Quote, TweetType::Reply}) {
        put(static_cast<double>(std::count_if(tl.begin(), tl.end(), [&](const Tweet* t) { return t->tweet_type == type; })) / n);
    }
    // client tf-idf into 16 hashed buckets
    {
        std::vector<std::string> toks;
        for (const Tweet* t : tl) {
            for (auto& w : words(client_of(t->client_source))) toks.push_back(w);
        }
        std::array<double, 16> bucket{};
        std::set<std::string> distinct(toks.begin(), toks.end());
        for (const auto& w : distinct) {
            const double tf = static_cast<double>(std::count(toks.begin(), toks.end(), w)) / static_cast<double>(toks.size());
            const double d = c.df.count(w) ? c.df.at(w) : 0;
            bucket[fnv(w) % 16] += tf * (std::log((1.0 + c.accounts) / (1.0 + d)) + 1.0);
        }
        double sq = 0;
        for (double v : bucket) sq += v * v;
        for (double v : bucket) put(sq > 0 ? v / std::sqrt(sq) : 0.0);
    }
    {
        bool any = false;
        std::set<std::string> names;
        for (const Tweet* t : tl) {
            const auto name = client_of(t->client_source);
            any = any || official(name);
            if (!name.empty()) names.insert(name);
        }
        put(any ? 1 : 0);
        put(static_cast<double>(names.size()));
    }
    for (auto type : {TweetType::Retweet, TweetType::Quote, TweetType::Reply}) {
        std::set<UserId> users;
        for (const Tweet* t : tl) {
            if (t->tweet_type == type && t->referenced_author_id) users.insert(*t->referenced_author_id);
        }
        put(static_cast<double>(users.size()) / n);
    }
    {
        std::size_t longest = 0;
        std::set<UserId> partners;
        for (const Tweet* t : tl) {
            if (t->tweet_type != TweetType::Reply || !t->referenced_tweet_id) continue;
            std::vector<const Tweet*> chain;
            auto id = t->referenced_tweet_id;
            while (id && c.by_id.count(*id) && chain.size() < 100000) {
                const Tweet* p = c.by_id.at(*id);
                chain.push_back(p);
                id = p->tweet_type == TweetType::Reply ? p->referenced_tweet_id : std::nullopt;
            }
            if (chain.empty() || chain[0]->author_id() == who) continue;
            const UserId partner = chain[0]->author_id();
            std::size_t len = 0;
            while (len < chain.size() && chain[len]->author_id() == (len % 2 == 0 ? partner : who)) ++len;
            partners.insert(partner);
            longest = std::max(longest, len);
        }
        put(static_cast<double>(longest));
        put(static_cast<double>(partners.size()) / n);
    }

    // text
    std::vector<double> len;
    for (const Tweet* t : tl) len.push_back(static_cast<double>(code_points(t->text)));
    double mean = 0;
    for (double l : len) mean += l;
    mean /= n;
    double var = 0;
    for (double l : len) var += (l - mean) * (l - mean);
    put(mean);
    put(std::sqrt(var / n));
    auto share = [&](auto pred) {
        return static_cast<double>(std::count_if(tl.begin(), tl.end(), pred)) / n;
    };
    auto novel = [&](auto values) {
        std::vector<std::string> seen;
        double hits = 0;
        for (const Tweet* t : tl) {
            bool fresh = false;
            for (const auto& v : values(*t)) {
                if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
                    seen.push_back(v);
                    fresh = true;
                }
            }
            hits += fresh;
        }
        return hits / n;
    };
    put(share([](const Tweet* t) { return !t->urls.empty(); }));
    put(novel([](const Tweet& t) { return t.urls; }));
    put(novel([](const Tweet& t) {
        std::vector<std::string> h;
        for (const auto& u : t.urls) {
            if (!host_of(u).empty()) h.push_back(host_of(u));
        }
        return h;
    }));
    {
        std::vector<std::string> all;
        for (const Tweet* t : tl) {
            for (auto& w : words(t->text)) all.push_back(w);
        }
        std::set<std::string> distinct(all.begin(), all.end());
        put(all.empty() ? 1.0 : static_cast<double>(distinct.size()) / static_cast<double>(all.size()));
    }
    put(share([](const Tweet* t) { return !t->mentions.empty(); }));
    put(share([](const Tweet* t) { return !t->hashtags.empty(); }));
    put(novel([](const Tweet& t) {
        std::vector<std::string> m;
        for (auto id : t.mentions) m.push_back(std::to_string(id));
        return m;
    }));
    put(novel([](const Tweet& t) { return t.hashtags; }));
    put(share([](const Tweet* t) {
        const std::string s = strip(t->text);
        std::string last;
        for (char ch : s) {
            if (is_space(ch)) last.clear();
            else last += ch;
        }
        return last.size() >= 2 && last[0] == '#';
    }));
    put(share([](const Tweet* t) {
        const std::string s = strip(t->text);
        return s.size() >= 2 && s[0] == '@';
    }));
    put(share([](const Tweet* t) {
        const std::string s = strip(t->text);
        return s == "RT" || s.substr(0, 3) == "RT " || s.substr(0, 3) == "RT:" || s.substr(0, 3) == "RT\t";
    }));
    std::string joined;
    for (const Tweet* t : tl) joined += (joined.empty() && t == tl.front() ? "" : "\n") + t->text;
    put(deflate_ratio(joined));
    put(static_cast<double>(simhash(joined)) / 18446744073709551616.0);
    {
        std::vector<unsigned long long> fp;
        for (const Tweet* t : tl) fp.push_back(simhash(t->text));
        double total = 0, with = 0;
        for (std::size_t i = 0; i < fp.size(); ++i) {
            int similar = 0;
            for (std::size_t j = 0; j < fp.size(); ++j) {
                if (i != j && bits_differing(fp[i], fp[j]) <= 3) ++similar;
            }
            total += similar;
            with += similar > 0;
        }
        put(total / n);
        put(with / n);
    }

    // time
    std::vector<long long> ts;
    for (const Tweet* t : tl) ts.push_back(unix_of(*t));
    {
        std::array<double, 60> bins{};
        for (long long t : ts) bins[static_cast<std::size_t>(((t % 60) + 60) % 60)] += 1;
        double chi = 0;
        for (double o : bins) chi += (o - n / 60) * (o - n / 60) / (n / 60);
        put(chi);
    }
    const auto [b1, b2] = breaks(ts, 48 * 3600);
    put(b1 / 3600.0);
    put(b2 / 3600.0);
    for (auto type : {TweetType::Retweet, TweetType::Quote}) {
        std::vector<double> d;
        for (const Tweet* t : tl) {
            if (t->tweet_type == type && t->referenced_tweet_id && c.by_id.count(*t->referenced_tweet_id)) {
                d.push_back(static_cast<double>(unix_of(*t) - unix_of(*c.by_id.at(*t->referenced_tweet_id))) / 3600.0);
            }
        }
        put(d.empty() ? (type == TweetType::Retweet ? c.rt_median : c.qt_median) : median(d));
    }

    // user
    const double fr = static_cast<double>(profile.friends), fo = static_cast<double>(profile.followers);
    put(fr);
    put(fo);
    put(fr + fo == 0 ? 0.0 : fr / (fr + fo));
    put(profile.default_profile_image);
    put(profile.default_user_image);
    put(profile.verified);
    put(profile.geo_enabled);
    put((lower(profile.screen_name).find("bot") != std::string::npos ||
         lower(profile.display_name).find("bot") != std::string::npos) ? 1 : 0);
    return f;
}

}  // namespace oracle
