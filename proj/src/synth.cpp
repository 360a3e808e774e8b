#include "astroturf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "astroturf/config.hpp"
#include "astroturf/csv.hpp"
#include "astroturf/error.hpp"
#include "astroturf/ingest.hpp"
#include "astroturf/rng.hpp"
#include "astroturf/text.hpp"

namespace astroturf::synth {

using nlohmann::json;

std::string_view to_string(Archetype a) {
    switch (a) {
        case Archetype::Human: return "human";
        case Archetype::Scheduler: return "scheduler";
        case Archetype::Repeater: return "repeater";
        case Archetype::Amplifier: return "amplifier";
    }
    return "?";
}

void SynthConfig::validate() const {
    if (!(span_days > 0)) throw DataError("span_days must be positive");
    if (weight_scheduler < 0 || weight_repeater < 0 || weight_amplifier < 0 ||
        std::abs(weight_scheduler + weight_repeater + weight_amplifier - 1.0) > 1e-9) {
        throw DataError("bot archetype weights must be non-negative and sum to 1");
    }
    if (!(scheduler_interval_min_minutes >= 1) || scheduler_interval_max_minutes < scheduler_interval_min_minutes) {
        throw DataError("invalid scheduler interval range");
    }
    if (!(bot_rate_min > 0) || bot_rate_max < bot_rate_min) throw DataError("invalid bot rate range");
    if (!(human_rate_min > 0) || human_rate_max < human_rate_min) throw DataError("invalid human rate range");
    if (!(human_gap_min_hours > 0) || human_gap_max_hours < human_gap_min_hours || human_gap_max_hours >= 20) {
        throw DataError("invalid human gap range");
    }
    if (vocabulary < 50) throw DataError("vocabulary must hold at least 50 words");
    if (fdp_fraction < 0 || fdp_fraction > 1) throw DataError("fdp_fraction must be in [0,1]");
    if (external_reference_fraction < 0 || external_reference_fraction > 1) {
        throw DataError("external_reference_fraction must be in [0,1]");
    }
    if (!parse_timestamp(start)) throw DataError("unparseable start '" + start + "'");
    const std::uint64_t n = n_humans + n_bots;
    std::set<UserId> trolls(troll_ids.begin(), troll_ids.end());
    for (auto id : troll_ids) {
        if (id < id_base || id >= id_base + n) throw DataError("troll id " + std::to_string(id) + " is not a generated account");
    }
    for (auto id : troll_renamed) {
        if (!trolls.count(id)) throw DataError("renamed troll " + std::to_string(id) + " is not in troll_ids");
    }
}

SynthConfig SynthConfig::load(const std::filesystem::path& path) {
    const json doc = config::load_toml(path);
    SynthConfig c;
    std::set<std::string> known;
    auto num = [&](const char* key, auto& field) {
        known.insert(key);
        if (!doc.contains(key)) return;
        using T = std::decay_t<decltype(field)>;
        const auto& v = doc.at(key);
        if (!v.is_number()) throw DataError(path.string() + ": " + key + " must be a number");
        field = v.get<T>();
    };
    auto ids = [&](const char* key, std::vector<UserId>& out) {
        known.insert(key);
        if (!doc.contains(key)) return;
        const auto& v = doc.at(key);
        if (!v.is_array()) throw DataError(path.string() + ": " + key + " must be an array of user ids");
        out.clear();
        for (const auto& id : v) {
            if (!id.is_number_integer() || id.get<std::int64_t>() < 0) throw DataError(path.string() + ": " + key + " must be an array of user ids");
            out.push_back(id.get<UserId>());
        }
    };
    num("n_humans", c.n_humans);
    num("n_bots", c.n_bots);
    num("span_days", c.span_days);
    num("seed", c.seed);
    num("id_base", c.id_base);
    num("weight_scheduler", c.weight_scheduler);
    num("weight_repeater", c.weight_repeater);
    num("weight_amplifier", c.weight_amplifier);
    num("scheduler_interval_min_minutes", c.scheduler_interval_min_minutes);
    num("scheduler_interval_max_minutes", c.scheduler_interval_max_minutes);
    num("bot_rate_min", c.bot_rate_min);
    num("bot_rate_max", c.bot_rate_max);
    num("human_gap_min_hours", c.human_gap_min_hours);
    num("human_gap_max_hours", c.human_gap_max_hours);
    num("human_rate_min", c.human_rate_min);
    num("human_rate_max", c.human_rate_max);
    num("vocabulary", c.vocabulary);
    num("fdp_fraction", c.fdp_fraction);
    num("external_reference_fraction", c.external_reference_fraction);
    num("troll_unlisted", c.troll_unlisted);
    known.insert("start");
    if (doc.contains("start")) {
        if (!doc.at("start").is_string()) throw DataError(path.string() + ": start must be a string");
        c.start = doc.at("start").get<std::string>();
    }
    ids("troll_ids", c.troll_ids);
    ids("troll_renamed", c.troll_renamed);
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) throw DataError(path.string() + ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

namespace {

constexpr std::array<std::string_view, 132> kWords = {
    "wahl", "deutschland", "regierung", "kanzlerin", "partei", "bundestag", "heute", "morgen", "wieder",
    "politik", "land", "menschen", "zukunft", "stimme", "programm", "debatte", "kandidat", "umfrage",
    "prozent", "koalition", "opposition", "minister", "rente", "steuer", "bildung", "schule", "arbeit",
    "familie", "sicherheit", "polizei", "grenze", "europa", "wirtschaft", "klima", "energie", "diesel",
    "auto", "bahn", "stadt", "dorf", "bürger", "wähler", "medien", "presse", "interview", "rede",
    "plakat", "kampagne", "abend", "woche", "jahr", "tag", "gut", "schlecht", "wichtig", "richtig",
    "falsch", "neue", "alte", "große", "kleine", "echt", "klar", "endlich", "immer", "nie", "mehr",
    "weniger", "alle", "keiner", "viele", "wenige", "unser", "euer", "ihr", "wir", "sie", "er", "es",
    "und", "oder", "aber", "doch", "denn", "weil", "wenn", "dass", "nicht", "kein", "noch", "schon",
    "sehr", "ganz", "nur", "auch", "hier", "dort", "jetzt", "dann", "gegen", "für", "mit", "ohne",
    "über", "unter", "nach", "vor", "bei", "von", "zum", "zur", "im", "am", "ist", "sind", "war",
    "wird", "hat", "haben", "kann", "muss", "soll", "will", "geht", "kommt", "sagt", "zeigt",
    "fordert", "verliert", "gewinnt", "wählt", "sieht"};

constexpr std::array<std::string_view, 20> kSyllables = {"ka", "ro", "mi", "sel", "tan", "bur", "gen",
                                                         "lo", "ver", "ne", "ha", "ti", "ste", "dor",
                                                         "wal", "ri", "be", "mun", "ol", "zu"};

constexpr std::array<std::string_view, 7> kPartyTerms = {"afd", "cdu", "csu", "spd", "linke", "gruene", "npd"};

constexpr std::array<std::string_view, 24> kHashtags = {
    "afd",     "btw17",        "spd",      "cdu",       "merkel",   "schulz",   "tvduell",   "linke",
    "gruene",  "wahl2017",     "csu",      "groko",     "npd",      "diesel",   "rente",     "europa",
    "klima",   "bundestagswahl", "traudichdeutschland", "fakenews", "migration", "sicherheit", "bildung",
    "zukunft"};

constexpr std::array<std::string_view, 12> kHosts = {"www.spiegel.de", "www.welt.de", "www.bild.de",
                                                     "www.faz.net",    "www.zeit.de", "www.focus.de",
                                                     "youtu.be",       "www.tagesschau.de", "www.n-tv.de",
                                                     "jungefreiheit.de", "www.sueddeutsche.de", "www.t-online.de"};

constexpr std::array<std::string_view, 24> kFirstNames = {
    "Anna", "Lukas", "Marie", "Jonas", "Sophie", "Felix", "Laura", "Paul", "Lea", "Max", "Julia", "Tim",
    "Sarah", "Jan", "Lisa", "Finn", "Nina", "Tom", "Katrin", "Uwe", "Petra", "Jürgen", "Heike", "Botho"};
constexpr std::array<std::string_view, 20> kLastNames = {
    "Müller", "Schmidt", "Schneider", "Fischer", "Weber", "Meyer", "Wagner", "Becker", "Schulz", "Hoffmann",
    "Koch",   "Richter", "Klein",     "Wolf",    "Neumann", "Braun", "Krüger", "Hartmann", "Lange", "Werner"};

struct Client {
    std::string_view name;
    std::string_view href;
};
constexpr std::array<Client, 4> kOfficialClients = {{{"Twitter for iPhone", "http://twitter.com/download/iphone"},
                                                     {"Twitter for Android", "http://twitter.com/download/android"},
                                                     {"Twitter Web Client", "http://twitter.com"},
                                                     {"TweetDeck", "https://about.twitter.com/products/tweetdeck"}}};
constexpr std::array<Client, 3> kHumanThirdParty = {{{"Tweetbot for iΟS", "https://tapbots.com/tweetbot"},
                                                     {"Hootsuite", "https://hootsuite.com"},
                                                     {"Echofon", "http://www.echofon.com/"}}};
constexpr std::array<Client, 5> kAutomationClients = {{{"dlvr.it", "http://dlvr.it"},
                                                       {"IFTTT", "https://ifttt.com"},
                                                       {"twittbot.net", "http://twittbot.net/"},
                                                       {"Buffer", "https://buffer.com"},
                                                       {"RoundTeam", "https://roundteam.co"}}};

std::string source_of(const Client& c) {
    return "<a href=\"" + std::string(c.href) + "\" rel=\"nofollow\">" + std::string(c.name) + "</a>";
}

class Zipf {
public:
    Zipf(std::size_t n, double exponent) : cdf_(n) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cdf_[i] = s;
        }
        for (auto& c : cdf_) c /= s;
    }
    std::size_t operator()(Rng& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

struct Language {
    std::vector<std::string> words;
    std::vector<std::array<std::uint32_t, 6>> successors;
    Zipf word_rank;
    Zipf tag_rank{kHashtags.size(), 1.1};
    Zipf media_rank{400, 1.2};

    Language(std::size_t vocab, Rng& rng) : word_rank(vocab, 1.05) {
        for (auto w : kWords) words.emplace_back(w);
        while (words.size() < vocab) {
            std::string w;
            const std::size_t syl = 2 + rng.index(3);
            for (std::size_t s = 0; s < syl; ++s) w += kSyllables[rng.index(kSyllables.size())];
            if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
        }
        words.resize(vocab);
        successors.resize(vocab);
        for (auto& succ : successors) {
            for (auto& s : succ) s = static_cast<std::uint32_t>(word_rank(rng));
        }
    }

    std::string sentence(Rng& rng, std::size_t min_len = 6, std::size_t max_len = 18) const {
        const std::size_t len = min_len + rng.index(max_len - min_len + 1);
        std::size_t w = word_rank(rng);
        std::string out;
        for (std::size_t i = 0; i < len; ++i) {
            if (i) out += ' ';
            std::string word = words[w];
            if (i == 0 && !word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
            out += word;
            w = rng.bernoulli(0.8) ? successors[w][rng.index(6)] : word_rank(rng);
        }
        return out;
    }

    std::string hashtag(Rng& rng) const { return std::string(kHashtags[tag_rank(rng)]); }
};

struct Account {
    UserId id = 0;
    Archetype archetype = Archetype::Human;
    UserProfile profile;
    std::optional<std::string> new_name;
    Timestamp rename_at{};
    double rate = 1.0;                       // tweets per day
    std::int64_t interval_seconds = 0;       // scheduler
    std::vector<std::string> templates;      // scheduler / repeater texts
    std::vector<Client> clients;
    std::string host;                        // scheduler news host
    std::array<double, 4> type_weights{};    // indexed by TweetType
    std::vector<std::pair<std::int64_t, std::int64_t>> sleeps;  // human sleep intervals
    bool influencer = false;

    const std::string& name_at(Timestamp t) const {
        return new_name && t >= rename_at ? *new_name : profile.screen_name;
    }
};

std::string random_token(Rng& rng, std::size_t len) {
    static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.index(alphabet.size())];
    return s;
}

std::string make_screen_name(Rng& rng, bool bot) {
    std::string base = std::string(kFirstNames[rng.index(kFirstNames.size())]);
    if (bot) {
        static constexpr std::array<std::string_view, 6> stems = {"news", "info", "patriot", "wahrheit", "deutsch", "echo"};
        base = std::string(stems[rng.index(stems.size())]) + "_" + random_token(rng, 4);
    } else {
        base += "_" + std::string(kLastNames[rng.index(kLastNames.size())]).substr(0, 4);
    }
    std::string ascii;
    for (char c : base) {
        if (text::is_token_byte(static_cast<unsigned char>(c)) && static_cast<unsigned char>(c) < 0x80) {
            ascii += c;
        } else if (c == '_') {
            ascii += c;
        }
    }
    return ascii + std::to_string(rng.index(100));
}

void pick_type_weights(Account& a) {
    switch (a.archetype) {
        case Archetype::Human: a.type_weights = {0.45, 0.33, 0.10, 0.12}; break;
        case Archetype::Scheduler: a.type_weights = {1.0, 0.0, 0.0, 0.0}; break;
        case Archetype::Repeater: a.type_weights = {0.7, 0.0, 0.0, 0.3}; break;
        case Archetype::Amplifier: a.type_weights = {0.07, 0.9, 0.03, 0.0}; break;
    }
}

TweetType draw_type(const Account& a, Rng& rng) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < 4; ++i) {
        if (u < a.type_weights[i]) return static_cast<TweetType>(i);
        u -= a.type_weights[i];
    }
    return TweetType::Original;
}

// Poisson arrivals at `per_day` over awake time, skipping sorted sleep intervals.
std::vector<std::int64_t> poisson_times(Rng& rng, double per_day, std::int64_t begin, std::int64_t end,
                                        const std::vector<std::pair<std::int64_t, std::int64_t>>& sleeps) {
    std::vector<std::int64_t> out;
    const double rate = per_day / static_cast<double>(kSecondsPerDay);
    double cur = static_cast<double>(begin);
    std::size_t s = 0;
    double remaining = rng.exponential(rate);
    while (cur < static_cast<double>(end)) {
        while (s < sleeps.size() && static_cast<double>(sleeps[s].second) <= cur) ++s;
        if (s < sleeps.size() && static_cast<double>(sleeps[s].first) <= cur) {
            cur = static_cast<double>(sleeps[s].second);
            continue;
        }
        const double next_sleep = s < sleeps.size() ? static_cast<double>(sleeps[s].first) : INFINITY;
        if (cur + remaining < next_sleep) {
            cur += remaining;
            if (cur >= static_cast<double>(end)) break;
            out.push_back(static_cast<std::int64_t>(std::floor(cur)));
            remaining = rng.exponential(rate);
        } else {
            remaining -= next_sleep - cur;
            cur = static_cast<double>(sleeps[s].second);
        }
    }
    return out;
}

struct Draft {
    std::size_t account;
    std::int64_t time;
    TweetType type;
};

}  // namespace

Corpus generate(const SynthConfig& cfg) {
    cfg.validate();
    Corpus corpus;
    const std::uint64_t n_accounts = cfg.n_humans + cfg.n_bots;
    if (n_accounts == 0) return corpus;

    Rng world(mix_seed(cfg.seed, 0xC0FFEE));
    const Language lang(cfg.vocabulary, world);
    const Timestamp start = *parse_timestamp(cfg.start);
    const std::int64_t t0 = to_unix(start);
    const std::int64_t t_end = t0 + static_cast<std::int64_t>(std::llround(cfg.span_days * kSecondsPerDay));
    const std::int64_t midpoint = t0 + (t_end - t0) / 2;

    std::vector<Archetype> roles(cfg.n_humans, Archetype::Human);
    for (std::uint64_t b = 0; b < cfg.n_bots; ++b) {
        const double u = world.uniform();
        roles.push_back(u < cfg.weight_scheduler                          ? Archetype::Scheduler
                        : u < cfg.weight_scheduler + cfg.weight_repeater ? Archetype::Repeater
                                                                          : Archetype::Amplifier);
    }
    world.shuffle(std::span<Archetype>(roles));

    const std::set<UserId> renamed_trolls(cfg.troll_renamed.begin(), cfg.troll_renamed.end());
    std::vector<Account> accounts(n_accounts);
    std::vector<std::size_t> humans;
    for (std::size_t i = 0; i < n_accounts; ++i) {
        Account& a = accounts[i];
        Rng rng(mix_seed(cfg.seed, i + 1));
        a.id = cfg.id_base + i;
        a.archetype = roles[i];
        const bool bot = a.archetype != Archetype::Human;
        if (!bot) humans.push_back(i);
        pick_type_weights(a);
        UserProfile& p = a.profile;
        p.user_id = a.id;
        p.screen_name = make_screen_name(rng, bot);
        p.display_name = std::string(kFirstNames[rng.index(kFirstNames.size())]) + " " +
                         std::string(kLastNames[rng.index(kLastNames.size())]);
        if (bot && rng.bernoulli(0.08)) {
            p.screen_name += "Bot";
            p.display_name += " Bot";
        }
        // Accounts created 2009..2017; bots skew recent.
        const double age_years = bot ? rng.uniform(0.05, 3.0) : rng.uniform(0.5, 8.5);
        p.account_created_at = from_unix(t0 - static_cast<std::int64_t>(age_years * 365.25 * kSecondsPerDay));
        p.followers = static_cast<std::uint64_t>(std::exp((bot ? 4.2 : 5.0) + 1.6 * rng.normal()));
        p.friends = static_cast<std::uint64_t>(std::exp((bot ? 5.7 : 5.3) + 1.1 * rng.normal()));
        p.verified = !bot && rng.bernoulli(0.02);
        p.default_profile_image = rng.bernoulli(bot ? 0.15 : 0.05);
        p.default_user_image = rng.bernoulli(bot ? 0.45 : 0.3);
        p.geo_enabled = rng.bernoulli(bot ? 0.05 : 0.25);

        switch (a.archetype) {
            case Archetype::Human: {
                a.rate = rng.uniform(cfg.human_rate_min, cfg.human_rate_max);
                // Some people mostly pass on what they read, at a higher pace.
                if (rng.bernoulli(0.08)) {
                    a.type_weights = {0.2, 0.65, 0.05, 0.10};
                    a.rate *= 2.5;
                }
                const std::size_t n_clients = 1 + rng.index(2);
                for (std::size_t c = 0; c < n_clients; ++c) {
                    a.clients.push_back(rng.bernoulli(0.85) ? kOfficialClients[rng.index(kOfficialClients.size())]
                                                            : kHumanThirdParty[rng.index(kHumanThirdParty.size())]);
                }
                // Nightly sleep: starts 22:00-01:00 shifted by the account's offset.
                const double shift_hours = rng.uniform(-2.0, 2.0);
                for (std::int64_t day = -1; t0 + day * kSecondsPerDay < t_end + kSecondsPerDay; ++day) {
                    const double begin_h = 22.0 + rng.uniform(0.0, 3.0) + shift_hours;
                    const double len_h = rng.uniform(cfg.human_gap_min_hours, cfg.human_gap_max_hours);
                    const auto b = t0 + day * kSecondsPerDay + static_cast<std::int64_t>(begin_h * kSecondsPerHour);
                    a.sleeps.emplace_back(b, b + static_cast<std::int64_t>(std::ceil(len_h * kSecondsPerHour)));
                }
                break;
            }
            case Archetype::Scheduler: {
                const double minutes = std::floor(rng.uniform(cfg.scheduler_interval_min_minutes,
                                                              cfg.scheduler_interval_max_minutes + 1.0));
                a.interval_seconds = static_cast<std::int64_t>(std::min(minutes, cfg.scheduler_interval_max_minutes)) * 60;
                a.clients.push_back(kAutomationClients[rng.index(kAutomationClients.size())]);
                a.host = std::string(kHosts[rng.index(kHosts.size())]);
                const std::size_t n_templates = 3 + rng.index(6);
                for (std::size_t k = 0; k < n_templates; ++k) a.templates.push_back(lang.sentence(rng, 4, 7));
                break;
            }
            case Archetype::Repeater: {
                a.rate = rng.uniform(cfg.bot_rate_min, cfg.bot_rate_max);
                a.clients.push_back(kAutomationClients[rng.index(kAutomationClients.size())]);
                const std::size_t n_templates = 1 + rng.index(5);
                for (std::size_t k = 0; k < n_templates; ++k) {
                    std::string t = lang.sentence(rng, 8, 16);
                    t += " #" + lang.hashtag(rng) + " #" + std::string(kPartyTerms[rng.index(kPartyTerms.size())]);
                    if (rng.bernoulli(0.5)) t += " https://" + std::string(kHosts[rng.index(kHosts.size())]) + "/" + random_token(rng, 8);
                    a.templates.push_back(std::move(t));
                }
                break;
            }
            case Archetype::Amplifier: {
                a.rate = rng.uniform(cfg.bot_rate_min, cfg.bot_rate_max);
                a.clients.push_back(rng.bernoulli(0.5) ? kOfficialClients[rng.index(kOfficialClients.size())]
                                                       : kAutomationClients[rng.index(kAutomationClients.size())]);
                break;
            }
        }
        if (renamed_trolls.count(a.id) || (!bot && !std::count(cfg.troll_ids.begin(), cfg.troll_ids.end(), a.id) &&
                                           rng.bernoulli(0.02))) {
            a.new_name = p.screen_name + "_" + random_token(rng, 3);
            a.rename_at = from_unix(midpoint);
        }
    }
    // A handful of popular human accounts attract a share of the references.
    {
        std::vector<std::size_t> pool = humans;
        world.shuffle(std::span<std::size_t>(pool));
        for (std::size_t i = 0; i < pool.size() && i < 15; ++i) accounts[pool[i]].influencer = true;
    }

    // Timestamps and types.
    std::vector<Draft> drafts;
    for (std::size_t i = 0; i < n_accounts; ++i) {
        Account& a = accounts[i];
        Rng rng(mix_seed(cfg.seed, (i + 1) * 0x9E37ULL));
        std::vector<std::int64_t> times;
        if (a.archetype == Archetype::Scheduler) {
            const std::int64_t offset = static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(a.interval_seconds)));
            for (std::int64_t t = t0 + offset; t < t_end; t += a.interval_seconds) times.push_back(t);
        } else {
            times = poisson_times(rng, a.rate, t0, t_end, a.sleeps);
        }
        for (auto t : times) drafts.push_back({i, t, draw_type(a, rng)});
    }
    std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
        return a.time != b.time ? a.time < b.time : a.account < b.account;
    });

    // Content, in time order so references only point backwards.
    const TweetId first_tweet_id = cfg.id_base * 100000;
    auto& tweets = corpus.tweets;
    tweets.reserve(drafts.size());
    std::vector<std::size_t> referenceable;                        // originals and quotes
    std::vector<std::size_t> repliable;                            // anything but retweets
    std::map<std::size_t, std::vector<std::size_t>> influencer_tweets;
    std::map<std::size_t, std::size_t> last_reply_to;              // account -> latest reply addressed to it
    std::vector<std::size_t> author_of;
    Rng rng(mix_seed(cfg.seed, 0xBEEF));

    auto external_name = [&](std::uint64_t k) { return "presse_" + std::to_string(k); };
    auto own_text = [&](const Account& a, Tweet& t) {
        std::string body;
        switch (a.archetype) {
            case Archetype::Scheduler: {
                body = a.templates[rng.index(a.templates.size())] + " " + lang.sentence(rng, 3, 4);
                const std::size_t tags = 2 + rng.index(2);
                for (std::size_t k = 0; k < tags; ++k) body += " #" + std::string(kHashtags[rng.index(8)]);
                body += " https://" + a.host + "/" + random_token(rng, 10);
                break;
            }
            case Archetype::Repeater:
                if (rng.bernoulli(0.7)) {
                    body = a.templates[rng.index(a.templates.size())];
                    break;
                }
                [[fallthrough]];
            default: {
                body = lang.sentence(rng);
                if (rng.bernoulli(0.5)) {
                    const std::size_t pos = body.find(' ');
                    body.insert(pos == std::string::npos ? body.size() : pos, " " + std::string(kPartyTerms[rng.index(kPartyTerms.size())]));
                }
                if (rng.bernoulli(0.45)) {
                    const std::size_t tags = 1 + rng.index(2);
                    for (std::size_t k = 0; k < tags; ++k) body += " #" + lang.hashtag(rng);
                }
                if (rng.bernoulli(0.2)) {
                    body += " https://" + std::string(kHosts[rng.index(kHosts.size())]) + "/" + random_token(rng, 8);
                }
                if (rng.bernoulli(0.06)) t.media_ids.push_back("m" + std::to_string(1000 + lang.media_rank(rng)));
                if (rng.bernoulli(0.1) && !humans.empty()) {
                    const auto& other = accounts[humans[rng.index(humans.size())]];
                    body += " @" + other.name_at(t.created_at);
                    t.mentions.push_back(other.id);
                }
            }
        }
        // Every tweet must hit a collection term.
        std::vector<std::string> party(kPartyTerms.begin(), kPartyTerms.end());
        bool on_topic = false;
        for (const auto& tok : text::tokenize(body)) on_topic = on_topic || std::count(party.begin(), party.end(), tok);
        if (!on_topic) body += " #" + std::string(kPartyTerms[rng.index(kPartyTerms.size())]);
        return body;
    };
    auto finish = [&](Tweet& t) {
        t.hashtags = text::extract_hashtags(t.text);
        t.urls.clear();
        std::size_t pos = 0;
        while ((pos = t.text.find("https://", pos)) != std::string::npos) {
            std::size_t end = t.text.find(' ', pos);
            t.urls.push_back(t.text.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
            pos = end == std::string::npos ? t.text.size() : end;
        }
    };

    for (std::size_t d = 0; d < drafts.size(); ++d) {
        const Draft& dr = drafts[d];
        const Account& a = accounts[dr.account];
        Tweet t;
        t.tweet_id = first_tweet_id + d;
        t.created_at = from_unix(dr.time);
        t.author = a.profile;
        t.author.screen_name = a.name_at(t.created_at);
        t.tweet_type = dr.type;
        t.client_source = source_of(a.clients[rng.index(a.clients.size())]);
        t.lang = "de";

        auto pick_other = [&](const std::vector<std::size_t>& pool) -> std::optional<std::size_t> {
            for (int attempt = 0; attempt < 6 && !pool.empty(); ++attempt) {
                const std::size_t idx = pool[rng.index(pool.size())];
                if (author_of[idx] != dr.account) return idx;
            }
            return std::nullopt;
        };

        std::optional<std::size_t> target;
        if (dr.type != TweetType::Original && !rng.bernoulli(cfg.external_reference_fraction)) {
            if (dr.type == TweetType::Reply) {
                auto it = last_reply_to.find(dr.account);
                if (it != last_reply_to.end() && rng.bernoulli(0.35) && author_of[it->second] != dr.account) {
                    target = it->second;
                } else {
                    target = pick_other(repliable);
                }
            } else {
                const double influence = a.archetype == Archetype::Amplifier ? 0.6 : 0.4;
                if (rng.bernoulli(influence) && !influencer_tweets.empty()) {
                    auto it = influencer_tweets.begin();
                    std::advance(it, static_cast<std::ptrdiff_t>(rng.index(influencer_tweets.size())));
                    target = pick_other(it->second);
                }
                if (!target) target = pick_other(referenceable);
            }
        }

        if (dr.type == TweetType::Original) {
            t.text = own_text(a, t);
            finish(t);
        } else if (target) {
            const Tweet& ref = tweets[*target];
            const Account& ref_author = accounts[author_of[*target]];
            t.referenced_tweet_id = ref.tweet_id;
            t.referenced_author_id = ref_author.id;
            const std::string ref_name = ref_author.name_at(t.created_at);
            if (dr.type == TweetType::Retweet) {
                t.text = "RT @" + ref_name + ": " + ref.text;
                t.hashtags = ref.hashtags;
                t.urls = ref.urls;
                t.media_ids = ref.media_ids;
                t.mentions = {ref_author.id};
            } else if (dr.type == TweetType::Quote) {
                t.text = own_text(a, t);
                finish(t);
            } else {
                t.text = "@" + ref_name + " " + own_text(a, t);
                finish(t);
                t.mentions.insert(t.mentions.begin(), ref_author.id);
                last_reply_to[author_of[*target]] = tweets.size();
            }
        } else {
            // External reference: a press account outside the corpus.
            const std::uint64_t k = rng.index(30);
            t.referenced_tweet_id = 900000000000000000ULL + rng.index(1000000000ULL);
            t.referenced_author_id = 900000000ULL + k;
            if (dr.type == TweetType::Retweet) {
                Account press;
                press.archetype = Archetype::Human;
                t.text = "RT @" + external_name(k) + ": " + own_text(press, t);
                finish(t);
                t.mentions = {*t.referenced_author_id};
            } else if (dr.type == TweetType::Quote) {
                t.text = own_text(a, t);
                finish(t);
            } else {
                t.text = "@" + external_name(k) + " " + own_text(a, t);
                finish(t);
            }
        }

        const std::size_t index = tweets.size();
        author_of.push_back(dr.account);
        if (t.tweet_type == TweetType::Original || t.tweet_type == TweetType::Quote) {
            referenceable.push_back(index);
            if (a.influencer) influencer_tweets[dr.account].push_back(index);
        }
        if (t.tweet_type != TweetType::Retweet) repliable.push_back(index);
        tweets.push_back(std::move(t));
    }

    // Party-term exclusion fodder: exactly round(fraction * N) tweets get "FDP".
    if (cfg.fdp_fraction > 0 && !tweets.empty()) {
        std::vector<std::size_t> idx(tweets.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        world.shuffle(std::span<std::size_t>(idx));
        const auto count = static_cast<std::size_t>(std::llround(cfg.fdp_fraction * static_cast<double>(tweets.size())));
        for (std::size_t i = 0; i < count; ++i) tweets[idx[i]].text += " FDP";
        corpus.truth.fdp_tweets = count;
    }

    // Labels, troll list and bookkeeping.
    Bookkeeping& truth = corpus.truth;
    const std::set<UserId> troll_set(cfg.troll_ids.begin(), cfg.troll_ids.end());
    for (const auto& a : accounts) {
        const auto label = a.archetype == Archetype::Human ? features::Label::Human : features::Label::Bot;
        corpus.labels[a.id] = label;
    }
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        const Tweet& t = tweets[i];
        const UserId author = t.author_id();
        auto& acc = truth.accounts[author];
        ++acc.tweets;
        ++acc.type_counts[static_cast<std::size_t>(t.tweet_type)];
        ++truth.total_tweets;
        for (const auto& h : t.hashtags) ++truth.hashtag_counts[h];
        std::set<std::string> uniq(t.hashtags.begin(), t.hashtags.end());
        for (auto x = uniq.begin(); x != uniq.end(); ++x) {
            for (auto y = std::next(x); y != uniq.end(); ++y) ++truth.pair_counts[*x + "+" + *y];
        }
        for (const auto& m : t.media_ids) ++truth.media_counts[m];
        if (t.referenced_author_id) {
            if (t.tweet_type == TweetType::Retweet) ++truth.retweeted_counts[*t.referenced_author_id];
            if (t.tweet_type == TweetType::Quote) ++truth.quoted_counts[*t.referenced_author_id];
        }
        ++truth.daily_type_counts[format_day(t.created_at)][static_cast<std::size_t>(t.tweet_type)];
        const bool by_troll = troll_set.count(author) > 0;
        if (by_troll && t.tweet_type == TweetType::Retweet) ++truth.trolls.retweets_by_trolls;
        if (t.referenced_author_id && troll_set.count(*t.referenced_author_id)) {
            if (t.tweet_type == TweetType::Retweet) {
                ++(by_troll ? truth.trolls.retweets_of_trolls_by_trolls : truth.trolls.retweets_of_trolls_by_others);
            } else if (t.tweet_type == TweetType::Quote) {
                ++(by_troll ? truth.trolls.quotes_of_trolls_by_trolls : truth.trolls.quotes_of_trolls_by_others);
            }
        }
        truth.final_screen_names[author] = t.author.screen_name;
    }
    for (const auto& a : accounts) {
        auto& acc = truth.accounts[a.id];
        acc.archetype = a.archetype;
        acc.label = corpus.labels[a.id];
    }
    for (auto id : cfg.troll_ids) {
        const Account& a = accounts[id - cfg.id_base];
        corpus.troll_list.emplace_back(id, a.profile.screen_name);
        truth.trolls.listed.push_back(id);
        if (truth.accounts[id].tweets > 0) truth.trolls.planted.push_back(id);
        if (a.new_name && truth.accounts[id].tweets > 0 && truth.final_screen_names[id] != a.profile.screen_name) {
            truth.trolls.renamed.push_back(id);
        }
    }
    for (std::size_t j = 0; j < cfg.troll_unlisted; ++j) {
        const UserId ghost = cfg.id_base + n_accounts + 1000 + j;
        corpus.troll_list.emplace_back(ghost, "ghost_" + std::to_string(j));
        truth.trolls.listed.push_back(ghost);
    }
    std::sort(truth.trolls.listed.begin(), truth.trolls.listed.end());
    std::sort(truth.trolls.planted.begin(), truth.trolls.planted.end());
    std::sort(truth.trolls.renamed.begin(), truth.trolls.renamed.end());
    return corpus;
}

json Bookkeeping::to_json() const {
    json accs = json::object();
    for (const auto& [id, a] : accounts) {
        accs[std::to_string(id)] = {{"archetype", to_string(a.archetype)},
                                    {"label", a.label == features::Label::Bot ? "bot" : "human"},
                                    {"tweets", a.tweets},
                                    {"types", a.type_counts}};
    }
    auto id_map = [](const std::map<UserId, std::uint64_t>& m) {
        json j = json::object();
        for (const auto& [k, v] : m) j[std::to_string(k)] = v;
        return j;
    };
    json daily = json::object();
    for (const auto& [day, c] : daily_type_counts) daily[day] = c;
    json names = json::object();
    for (const auto& [id, n] : final_screen_names) names[std::to_string(id)] = n;
    return {{"accounts", accs},
            {"total_tweets", total_tweets},
            {"fdp_tweets", fdp_tweets},
            {"hashtag_counts", hashtag_counts},
            {"pair_counts", pair_counts},
            {"media_counts", media_counts},
            {"retweeted_counts", id_map(retweeted_counts)},
            {"quoted_counts", id_map(quoted_counts)},
            {"daily_type_counts", daily},
            {"final_screen_names", names},
            {"trolls",
             {{"listed", trolls.listed},
              {"planted", trolls.planted},
              {"renamed", trolls.renamed},
              {"retweets_of_trolls_by_trolls", trolls.retweets_of_trolls_by_trolls},
              {"retweets_of_trolls_by_others", trolls.retweets_of_trolls_by_others},
              {"quotes_of_trolls_by_trolls", trolls.quotes_of_trolls_by_trolls},
              {"quotes_of_trolls_by_others", trolls.quotes_of_trolls_by_others},
              {"retweets_by_trolls", trolls.retweets_by_trolls}}}};
}

Bookkeeping Bookkeeping::from_json(const json& j) {
    Bookkeeping b;
    for (const auto& [id, a] : j.at("accounts").items()) {
        AccountTruth t;
        const auto arch = a.at("archetype").get<std::string>();
        for (auto x : {Archetype::Human, Archetype::Scheduler, Archetype::Repeater, Archetype::Amplifier}) {
            if (to_string(x) == arch) t.archetype = x;
        }
        t.label = a.at("label").get<std::string>() == "bot" ? features::Label::Bot : features::Label::Human;
        t.tweets = a.at("tweets").get<std::uint64_t>();
        t.type_counts = a.at("types").get<std::array<std::uint64_t, 4>>();
        b.accounts[std::stoull(id)] = t;
    }
    b.total_tweets = j.at("total_tweets").get<std::uint64_t>();
    b.fdp_tweets = j.at("fdp_tweets").get<std::uint64_t>();
    b.hashtag_counts = j.at("hashtag_counts").get<std::map<std::string, std::uint64_t>>();
    b.pair_counts = j.at("pair_counts").get<std::map<std::string, std::uint64_t>>();
    b.media_counts = j.at("media_counts").get<std::map<std::string, std::uint64_t>>();
    for (const auto& [k, v] : j.at("retweeted_counts").items()) b.retweeted_counts[std::stoull(k)] = v.get<std::uint64_t>();
    for (const auto& [k, v] : j.at("quoted_counts").items()) b.quoted_counts[std::stoull(k)] = v.get<std::uint64_t>();
    for (const auto& [k, v] : j.at("daily_type_counts").items()) b.daily_type_counts[k] = v.get<std::array<std::uint64_t, 4>>();
    for (const auto& [k, v] : j.at("final_screen_names").items()) b.final_screen_names[std::stoull(k)] = v.get<std::string>();
    const auto& tr = j.at("trolls");
    b.trolls.listed = tr.at("listed").get<std::vector<UserId>>();
    b.trolls.planted = tr.at("planted").get<std::vector<UserId>>();
    b.trolls.renamed = tr.at("renamed").get<std::vector<UserId>>();
    b.trolls.retweets_of_trolls_by_trolls = tr.at("retweets_of_trolls_by_trolls").get<std::uint64_t>();
    b.trolls.retweets_of_trolls_by_others = tr.at("retweets_of_trolls_by_others").get<std::uint64_t>();
    b.trolls.quotes_of_trolls_by_trolls = tr.at("quotes_of_trolls_by_trolls").get<std::uint64_t>();
    b.trolls.quotes_of_trolls_by_others = tr.at("quotes_of_trolls_by_others").get<std::uint64_t>();
    b.trolls.retweets_by_trolls = tr.at("retweets_by_trolls").get<std::uint64_t>();
    return b;
}

void write(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
    {
        const auto path = dir / "corpus.ndjson";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        for (const auto& t : corpus.tweets) out << serialize_tweet(t) << '\n';
        if (!out) throw DataError("write failed: " + path.string());
    }
    features::write_labels(corpus.labels, dir / "labels.csv");
    {
        const auto path = dir / "truth.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        out << corpus.truth.to_json().dump(1) << '\n';
    }
    if (!corpus.troll_list.empty()) {
        const auto path = dir / "trolls.csv";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        csv::write_row(out, {"user_id", "screen_name"});
        for (const auto& [id, name] : corpus.troll_list) csv::write_row(out, {std::to_string(id), name});
    }
}

}  // namespace astroturf::synth
