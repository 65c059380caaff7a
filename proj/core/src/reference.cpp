#include "ringrep/reference.hpp"

namespace ringrep {

std::vector<DegreeRow> depth2_degree_rows(long long q, bool corrected) {
  std::vector<DegreeRow> rows;
  if (q % 2 == 1) {
    rows = {
        {1, 1},
        {q, 1},
        {q + 1, (q - 3) / 2},
        {(q + 1) / 2, 2},
        {q - 1, (q - 1) / 2},
        {(q - 1) / 2, 2},
        {q * q + q, (q - 1) * (q - 1) / 2},
        {q * q - q, (q * q - 1) / 2},
        {(q * q - 1) / 2, corrected ? 4 * q : 2 * q},
    };
  } else {
    rows = {
        {1, 1},
        {q, 1},
        {q + 1, (q - 2) / 2},
        {q - 1, q / 2},
        {q * q + q, (q - 1) * (q - 2) / 2},
        {(q * q + q) / 2, 2 * (q - 1)},
        {q * q - q, (q * q - q) / 2},
        {(q * q - q) / 2, 2 * (q - 1)},
        {q * q - 1, q},
    };
  }
  return rows;
}

long long degree_rows_weight(const std::vector<DegreeRow>& rows) {
  long long w = 0;
  for (const DegreeRow& row : rows) w += row.count * row.degree * row.degree;
  return w;
}

long long depth_group_order(long long q, int r) {
  long long w = q * q * q - q;
  for (int i = 1; i < r; ++i) w *= q * q * q;
  return w;
}

}  // namespace ringrep
