#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace scm {

// Calendar month, the time index of all series. Ordered by (year, month).
struct MonthKey {
  int year = 0;
  int month = 1;  // 1..12

  friend auto operator<=>(const MonthKey&, const MonthKey&) = default;

  bool valid() const { return month >= 1 && month <= 12; }

  // "YYYY-MM", zero-padded. The only accepted wire format.
  std::string str() const;
  static MonthKey parse(std::string_view text);
};

// Next calendar month.
MonthKey successor(MonthKey m);

// m shifted by n months (n may be negative).
MonthKey advance(MonthKey m, int n);

// Signed month count from a to b; month_diff(a, successor(a)) == 1.
int month_diff(MonthKey a, MonthKey b);

}  // namespace scm
