//! Shared fixtures: the published small-parameter bound table, transcribed
//! cell by cell, with source tags mapped onto this crate's vocabulary.

/// (n, k, lower, lower_source, upper, upper_gap_vs_mms_floor).
///
/// Exact cells carry `EXACT-DIV` with equal bounds and zero gap.
pub const TABLE1: &[(u64, u64, u64, &str, u64, u64)] = &[
    (10, 4, 10, "MAIN(1)", 11, 5),
    (11, 4, 11, "LIMEA-RANGE", 19, 8),
    (12, 4, 55, "EXACT-DIV", 55, 0),
    (13, 4, 55, "MONO", 72, 12),
    (14, 4, 55, "MONO", 110, 23),
    (15, 4, 55, "MONO", 190, 37),
    (16, 4, 455, "EXACT-DIV", 455, 0),
    (17, 4, 455, "MONO", 636, 67),
    (18, 4, 648, "MAIN(2)", 994, 133),
    (19, 4, 648, "MONO", 1719, 219),
    (20, 4, 3876, "EXACT-DIV", 3876, 0),
    (21, 4, 3876, "MONO", 5601, 428),
    (22, 4, 5544, "MAIN(2)", 8844, 888),
    (23, 4, 5544, "MONO", 15355, 1469),
    (24, 4, 33649, "EXACT-DIV", 33649, 0),
    (25, 4, 33649, "MONO", 49605, 2971),
    (26, 4, 40898, "MAIN(3)", 78927, 6343),
    (27, 4, 40898, "MONO", 137410, 10595),
    (28, 4, 296010, "EXACT-DIV", 296010, 0),
    (29, 4, 296010, "MONO", 442270, 21745),
    (30, 4, 621075, "MAIN(3)", 707796, 47420),
    (31, 4, 621075, "MONO", 1234969, 79818),
    (32, 4, 2629575, "EXACT-DIV", 2629575, 0),
    (33, 4, 2629575, "MONO", 3966925, 165264),
    (12, 5, 12, "MAIN(1)", 13, 5),
    (13, 5, 12, "MONO", 19, 8),
    (14, 5, 17, "MAIN(1)", 33, 12),
    (15, 5, 91, "EXACT-DIV", 91, 0),
    (16, 5, 91, "MONO", 114, 16),
    (17, 5, 91, "MONO", 162, 28),
    (18, 5, 91, "MONO", 243, 48),
    (19, 5, 91, "MONO", 410, 74),
    (20, 5, 969, "EXACT-DIV", 969, 0),
    (21, 5, 969, "MONO", 1290, 103),
    (22, 5, 1008, "MAIN(2)", 1849, 208),
    (23, 5, 1008, "MONO", 2808, 366),
    (24, 5, 3366, "MAIN(2)", 4734, 579),
    (25, 5, 10626, "EXACT-DIV", 10626, 0),
    (26, 5, 10626, "MONO", 14514, 834),
    (27, 5, 10626, "MONO", 21020, 1750),
    (28, 5, 16016, "ALT(3)", 32169, 3150),
    (29, 5, 16830, "PRODUCT(5;24)", 54342, 5035),
    (30, 5, 118755, "EXACT-DIV", 118755, 0),
    (31, 5, 118755, "MONO", 164701, 7327),
    (32, 5, 139568, "MAIN(2)", 240248, 15849),
    (33, 5, 139568, "MONO", 369680, 29044),
    (14, 6, 13, "LIMEA-RANGE", 15, 5),
    (15, 6, 13, "MONO", 20, 8),
    (16, 6, 28, "MAIN(1)", 29, 13),
    (17, 6, 28, "MONO", 51, 17),
    (18, 6, 136, "EXACT-DIV", 136, 0),
    (19, 6, 136, "MONO", 167, 17),
    (20, 6, 210, "MAIN(1)", 221, 34),
    (21, 6, 210, "MONO", 308, 54),
    (22, 6, 210, "MONO", 454, 87),
    (23, 6, 210, "MONO", 751, 134),
    (24, 6, 1771, "EXACT-DIV", 1771, 0),
    (25, 6, 1771, "MONO", 2271, 144),
    (26, 6, 1771, "MONO", 3071, 285),
    (27, 6, 1771, "MONO", 4311, 494),
    (28, 6, 4140, "MAIN(2)", 6408, 818),
    (29, 6, 4140, "MONO", 10606, 1269),
    (30, 6, 23751, "EXACT-DIV", 23751, 0),
    (31, 6, 23751, "MONO", 31093, 1389),
    (32, 6, 33600, "MAIN(2)", 42433, 2876),
    (33, 6, 33600, "MONO", 60038, 5113),
    (16, 7, 15, "LIMEA-RANGE", 17, 5),
    (17, 7, 15, "MONO", 21, 8),
    (18, 7, 27, "MAIN(1)", 30, 10),
    (19, 7, 27, "MONO", 42, 17),
    (20, 7, 40, "MAIN(1)", 70, 25),
    (21, 7, 190, "EXACT-DIV", 190, 0),
    (22, 7, 190, "MONO", 227, 20),
    (23, 7, 190, "MONO", 291, 36),
    (24, 7, 190, "MONO", 384, 58),
    (25, 7, 190, "MONO", 525, 92),
    (26, 7, 286, "ALT(2)", 762, 144),
    (27, 7, 286, "MONO", 1242, 220),
    (28, 7, 2925, "EXACT-DIV", 2925, 0),
    (29, 7, 2925, "MONO", 3643, 187),
    (30, 7, 3003, "MAIN(1)", 4723, 366),
    (31, 7, 3003, "MONO", 6291, 615),
    (32, 7, 4800, "MAIN(2)", 8682, 999),
    (33, 7, 4800, "MONO", 12696, 1601),
];
