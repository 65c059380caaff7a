#pragma once
// Closed-form reference data for the depth-two determinant-1 groups
// G = SL2(F_q[eps]/(eps^2))^F: the classical table of irreducible degrees
// with their multiplicities, split by the parity of q.  The table command
// and the dimension checker compare exact computed tables against these
// rows.

#include <vector>

namespace ringrep {

// One row of the reference degree table: `count` irreducible characters of
// dimension `degree`.
struct DegreeRow {
  long long degree = 0;
  long long count = 0;
  friend bool operator==(const DegreeRow&, const DegreeRow&) = default;
};

// The reference rows for SL2(F_q[eps]/(eps^2))^F, in their conventional
// order.  Rows with count 0 at small q are kept so that callers can report
// every row.
//
// For odd q the commonly printed count for the two half-discrete-series
// degrees (q^2-1)/2 is 2q; that value is inconsistent with
// sum(count * degree^2) = |G| = q^3 (q^3 - q), which forces 4q, and exact
// computation at q = 3 confirms 4q.  `corrected` selects which variant is
// returned; it is ignored for even q, where the printed table is already
// consistent.
std::vector<DegreeRow> depth2_degree_rows(long long q, bool corrected);

// sum(count * degree^2) over the rows (the order of G when the table is
// consistent).
long long degree_rows_weight(const std::vector<DegreeRow>& rows);

// Expected order of SL2(F_q[eps]/(eps^r))^F: q^{3(r-1)} (q^3 - q).
long long depth_group_order(long long q, int r);

}  // namespace ringrep
