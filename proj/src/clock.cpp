#include "faultplan/clock.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace faultplan {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || value < 0) {
    throw std::invalid_argument("malformed clock time '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

ClockTime ClockTime::parse(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    throw std::invalid_argument("malformed clock time '" + std::string(text) + "', expected HH:MM");
  }
  const int hours = parse_field(text.substr(0, first), text);
  std::string_view rest = text.substr(first + 1);
  const auto second = rest.find(':');
  const int minutes = parse_field(rest.substr(0, second), text);
  int seconds = 0;
  if (second != std::string_view::npos) seconds = parse_field(rest.substr(second + 1), text);
  if (minutes >= 60 || seconds >= 60) {
    throw std::invalid_argument("malformed clock time '" + std::string(text) + "'");
  }
  return from_minutes(hours * 60.0 + minutes + seconds / 60.0);
}

std::string ClockTime::to_string() const {
  const long total_seconds = std::lround(minutes_ * 60.0);
  const long sign = total_seconds < 0 ? -1 : 1;
  const long s = total_seconds * sign;
  char buf[32];
  if (s % 60 == 0) {
    std::snprintf(buf, sizeof buf, "%s%02ld:%02ld", sign < 0 ? "-" : "", s / 3600, (s / 60) % 60);
  } else {
    std::snprintf(buf, sizeof buf, "%s%02ld:%02ld:%02ld", sign < 0 ? "-" : "", s / 3600,
                  (s / 60) % 60, s % 60);
  }
  return buf;
}

std::string ClockTime::to_hhmm() const {
  const long total = std::lround(minutes_);
  const long sign = total < 0 ? -1 : 1;
  const long m = total * sign;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02ld:%02ld", sign < 0 ? "-" : "", m / 60, m % 60);
  return buf;
}

}  // namespace faultplan
