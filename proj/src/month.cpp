#include "scm/month.hpp"

#include <charconv>
#include <cstdio>

#include "scm/error.hpp"

namespace scm {

std::string MonthKey::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

MonthKey MonthKey::parse(std::string_view text) {
  // Strict YYYY-MM; anything locale-dependent is rejected.
  auto fail = [&] {
    throw DataError("invalid month '" + std::string(text) + "', expected YYYY-MM");
  };
  if (text.size() != 7 || text[4] != '-') fail();
  MonthKey m;
  auto r1 = std::from_chars(text.data(), text.data() + 4, m.year);
  auto r2 = std::from_chars(text.data() + 5, text.data() + 7, m.month);
  if (r1.ec != std::errc() || r1.ptr != text.data() + 4) fail();
  if (r2.ec != std::errc() || r2.ptr != text.data() + 7) fail();
  if (!m.valid()) fail();
  return m;
}

MonthKey successor(MonthKey m) { return advance(m, 1); }

MonthKey advance(MonthKey m, int n) {
  int idx = m.year * 12 + (m.month - 1) + n;
  MonthKey out;
  out.year = idx >= 0 ? idx / 12 : -((-idx + 11) / 12);
  out.month = idx - out.year * 12 + 1;
  return out;
}

int month_diff(MonthKey a, MonthKey b) {
  return (b.year - a.year) * 12 + (b.month - a.month);
}

}  // namespace scm
