#include "astroturf/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace astroturf {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    bool digits(std::size_t n, int& out) {
        if (pos_ + n > s_.size()) return false;
        int v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            char c = s_[pos_ + i];
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            v = v * 10 + (c - '0');
        }
        pos_ += n;
        out = v;
        return true;
    }

    bool lit(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool word(std::string_view& out, std::size_t n) {
        if (pos_ + n > s_.size()) return false;
        out = s_.substr(pos_, n);
        pos_ += n;
        return true;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool done() const { return pos_ == s_.size(); }
    void skip() { ++pos_; }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::optional<Timestamp> make(int y, int mo, int d, int h, int mi, int s, int offset_seconds) {
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
    sys_seconds t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return t - seconds{offset_seconds};
}

bool parse_offset(Cursor& c, int& offset_seconds, bool colon_allowed) {
    char sign = c.peek();
    if (sign != '+' && sign != '-') return false;
    c.skip();
    int oh = 0;
    int om = 0;
    if (!c.digits(2, oh)) return false;
    if (colon_allowed) c.lit(':');
    if (!c.digits(2, om)) return false;
    offset_seconds = (oh * 3600 + om * 60) * (sign == '-' ? -1 : 1);
    return true;
}

std::optional<Timestamp> parse_platform(std::string_view text) {
    Cursor c(text);
    std::string_view wd;
    std::string_view mon;
    if (!c.word(wd, 3) || !c.lit(' ') || !c.word(mon, 3) || !c.lit(' ')) return std::nullopt;
    int mo = 0;
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (kMonths[i] == mon) mo = static_cast<int>(i) + 1;
    }
    if (mo == 0) return std::nullopt;
    int d = 0, h = 0, mi = 0, s = 0, y = 0, off = 0;
    if (!c.digits(2, d) || !c.lit(' ') || !c.digits(2, h) || !c.lit(':') || !c.digits(2, mi) ||
        !c.lit(':') || !c.digits(2, s) || !c.lit(' ') || !parse_offset(c, off, false) ||
        !c.lit(' ') || !c.digits(4, y) || !c.done()) {
        return std::nullopt;
    }
    return make(y, mo, d, h, mi, s, off);
}

std::optional<Timestamp> parse_iso(std::string_view text) {
    Cursor c(text);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, off = 0;
    if (!c.digits(4, y) || !c.lit('-') || !c.digits(2, mo) || !c.lit('-') || !c.digits(2, d)) {
        return std::nullopt;
    }
    if (!c.lit('T') && !c.lit(' ')) return std::nullopt;
    if (!c.digits(2, h) || !c.lit(':') || !c.digits(2, mi) || !c.lit(':') || !c.digits(2, s)) {
        return std::nullopt;
    }
    if (c.lit('.')) {
        while (std::isdigit(static_cast<unsigned char>(c.peek()))) c.skip();
    }
    if (!c.lit('Z') && !parse_offset(c, off, true)) return std::nullopt;
    if (!c.done()) return std::nullopt;
    return make(y, mo, d, h, mi, s, off);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) {
        return parse_iso(text);
    }
    return parse_platform(text);
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    auto dp = floor<days>(t);
    year_month_day ymd{dp};
    hh_mm_ss hms{t - dp};
    weekday wd{dp};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %s %02u %02d:%02d:%02d +0000 %04d",
                  kWeekdays[wd.c_encoding()].data(),
                  kMonths[static_cast<unsigned>(ymd.month()) - 1].data(),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()),
                  static_cast<int>(ymd.year()));
    return buf;
}

std::string format_iso(Timestamp t) {
    using namespace std::chrono;
    auto dp = floor<days>(t);
    year_month_day ymd{dp};
    hh_mm_ss hms{t - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::string format_day(Timestamp t) { return format_iso(t).substr(0, 10); }

std::string format_month(Timestamp t) { return format_iso(t).substr(0, 7); }

Timestamp floor_day(Timestamp t) {
    return Timestamp{std::chrono::floor<std::chrono::days>(t).time_since_epoch()};
}

}  // namespace astroturf
