#include <charconv>
#include <cstdio>

#include "trollslayer/error.hpp"
#include "trollslayer/ids.hpp"
#include "trollslayer/timeutil.hpp"

namespace trollslayer {

std::uint64_t parse_decimal_id(const std::string& text) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw DataError("not a decimal id: '" + text + "'");
  }
  return value;
}

namespace {

bool all_digits(const std::string& s, std::size_t pos, std::size_t len) {
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

int field(const std::string& s, std::size_t pos, std::size_t len) {
  return std::stoi(s.substr(pos, len));
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z' || !all_digits(text, 0, 4) ||
      !all_digits(text, 5, 2) || !all_digits(text, 8, 2) || !all_digits(text, 11, 2) ||
      !all_digits(text, 14, 2) || !all_digits(text, 17, 2)) {
    throw DataError("bad timestamp (want YYYY-MM-DDTHH:MM:SSZ): '" + text + "'");
  }
  const year_month_day ymd{year{field(text, 0, 4)}, month{unsigned(field(text, 5, 2))},
                           day{unsigned(field(text, 8, 2))}};
  const int hh = field(text, 11, 2);
  const int mm = field(text, 14, 2);
  const int ss = field(text, 17, 2);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw DataError("timestamp out of range: '" + text + "'");
  }
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const year_month_day ymd{day_start};
  const hh_mm_ss hms{ts - day_start};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

std::int64_t floor_days_between(Timestamp from, Timestamp to) {
  return std::chrono::floor<std::chrono::days>(to - from).count();
}

}  // namespace trollslayer
