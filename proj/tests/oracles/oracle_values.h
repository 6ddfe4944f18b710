// Generated by gen_oracles.py; do not edit.
#ifndef MINIMAX_TESTS_ORACLE_VALUES_H_
#define MINIMAX_TESTS_ORACLE_VALUES_H_

namespace minimax::oracle {

inline constexpr double kLogVmfD2Kappa1 = 2.073791424916524;

// Fisher-Bingham rows: a[d], gamma[d], log C, mean[d].
inline constexpr double kFisherBingham2[] = {2.2104142946456875, 1.5904976778241435, 0.7215055039307285, -1.6868277094846147, 0.7280127350774938, 0.2203661793724938, -0.6747340230730021, 0.591324352056227, 0.49606776811393966, -0.3896155275343781, 0.3649732152577991, 1.3646632660514777, -0.1837660970016481, 0.18043962023633567, 1.8817353874002656, 0.499045750116561, 1.2644098539973303, -1.3528077906170486, 1.4960919388778915, 0.3222491304970302, -0.6254829177917604};
inline constexpr double kFisherBingham3[] = {2.982380804443228, 2.904277062101971, 1.7982192789870315, 0.9479884327245791, -1.3873722233343753, 0.443690408745653, 0.44023030950726044, 0.2279839343496662, -0.34275192906093704, 0.16743953893807803, 2.36649209238155, 0.226125490926963, 1.953122728676659, -2.12818347969962, -1.882039377134946, 1.6115532736232265, 2.5692699337674076, -0.32993843298818026, -0.578003607977357, 0.2795495000607731, 0.4970295351678238, 1.3343722798177826, 2.3725298578572316, -2.5403820942389683, 0.6117612598811074, -0.8445145891183493, 2.476517257885018, -0.706675284254795, 0.12769693420245667, -0.13054685655102174};

inline constexpr double kTwoShellRadius = 2.0;
inline constexpr double kTwoShellMean = 0.21176510597529613;

inline constexpr double kRegX[] = {1.0, 0.5, 0.2, 1.0, -0.3, 0.4};
inline constexpr double kRegY[] = {0.7, -0.2, 0.5};
inline constexpr double kRegRadius = 1.5;
inline constexpr double kRegCircleMean[] = {0.46399415485502776, 0.1793127737980248};

// Exact risks by two-dimensional quadrature.
inline constexpr double kJamesSteinRiskD10AtSqrt10 = 6.218781224718394;
inline constexpr double kJamesSteinWorstD20 = 11.240844660460905;
inline constexpr double kBoundaryBayesRiskD10AtZero = 3.8435321705566814;
inline constexpr double kBoundaryBayesRiskD10AtRadius = 4.9191969350881335;

}  // namespace minimax::oracle

#endif  // MINIMAX_TESTS_ORACLE_VALUES_H_
