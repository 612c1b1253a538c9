#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace faultplan {

/// Time of day as minutes since midnight. Values past 24:00 are allowed so
/// that an evening episode can run into the next day without wrapping.
class ClockTime {
 public:
  constexpr ClockTime() = default;

  static constexpr ClockTime from_minutes(double minutes) { return ClockTime(minutes); }
  static constexpr ClockTime from_hours(double hours) { return ClockTime(hours * 60.0); }

  /// Parses "HH:MM" or "HH:MM:SS". Throws std::invalid_argument.
  static ClockTime parse(std::string_view text);

  constexpr double minutes() const { return minutes_; }
  constexpr double hours() const { return minutes_ / 60.0; }

  constexpr ClockTime plus_hours(double duration_h) const {
    return ClockTime(minutes_ + duration_h * 60.0);
  }
  /// Signed duration from `earlier` to this instant, in hours.
  constexpr double hours_since(ClockTime earlier) const {
    return (minutes_ - earlier.minutes_) / 60.0;
  }

  /// "HH:MM", or "HH:MM:SS" when the instant is not on a whole minute.
  std::string to_string() const;
  /// Rounded to the nearest minute, always "HH:MM".
  std::string to_hhmm() const;

  constexpr auto operator<=>(const ClockTime&) const = default;

 private:
  constexpr explicit ClockTime(double minutes) : minutes_(minutes) {}
  double minutes_ = 0.0;
};

}  // namespace faultplan
