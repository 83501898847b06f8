#pragma once

// Frozen cost-bound constant for the prefix covering:
//   cost <= kPrefixCostK * oe^{4/3} * (1 + log2(n)*log2(m))^2
// Calibrated once over 360 random instances (|A|,|B| up to 1024, u up to
// 3*10^4): max observed ratio 0.03125. Frozen with ~8x headroom.
inline constexpr double kPrefixCostK = 0.25;
