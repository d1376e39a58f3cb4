use serde::Serialize;

use crate::error::{Error, Result};

/// Which lower bound on the ball radius `N` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    /// `ceil((2n^2 + 2nd + 2n - d) / (n - 2d))`.
    #[default]
    Paper,
    /// `ceil((2n^2 - 2nd + 2n - d) / (n - 2d))`, the least `N` satisfying
    /// the length inequality.
    Tight,
}

impl std::str::FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoundMode> {
        match s {
            "paper" => Ok(BoundMode::Paper),
            "tight" => Ok(BoundMode::Tight),
            _ => Err(Error::Parse(format!("unknown bound mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for BoundMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundMode::Paper => "paper",
            BoundMode::Tight => "tight",
        })
    }
}

/// Least quotient diameter `n` with `n > 2d`.
pub fn required_n(d: u32) -> Result<u32> {
    if d == 0 {
        return Err(Error::Params("depth slack must be at least 1".into()));
    }
    d.checked_mul(2)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow { bits: 32 })
}

fn check_pair(n: u32, d: u32) -> Result<()> {
    if d == 0 || (n as u64) <= 2 * d as u64 {
        return Err(Error::Params(format!(
            "need n > 2d >= 2, got n = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Least ball radius `N` allowed by `mode` for diameter `n` and slack `d`.
pub fn required_ball_radius(n: u32, d: u32, mode: BoundMode) -> Result<u64> {
    check_pair(n, d)?;
    let (n, d) = (n as i128, d as i128);
    let cross = match mode {
        BoundMode::Paper => 2 * n * d,
        BoundMode::Tight => -2 * n * d,
    };
    let numerator = 2 * n * n + cross + 2 * n - d;
    let denominator = n - 2 * d;
    // numerator > 0 since 2n^2 - 2nd > n^2 > d
    let value = (numerator + denominator - 1) / denominator;
    u64::try_from(value.max(1)).map_err(|_| Error::Overflow { bits: 64 })
}

/// Whether `(n + dN) / (n - d) + 2n + 1 <= N`, evaluated without division.
/// This is what keeps every factor of a certificate inside the `S`-ball of
/// radius `N`.
pub fn length_inequality_holds(n: u32, d: u32, ball_radius: u64) -> bool {
    if (n as u64) <= d as u64 {
        return false;
    }
    let (n, d, big) = (n as i128, d as i128, ball_radius as i128);
    n + d * big + (2 * n + 1) * (n - d) <= big * (n - d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    /// Certified depth lower bound `D = d + 1`.
    pub target_depth: u32,
    pub d: u32,
    /// Diameter of the quotient.
    pub n: u32,
    /// Radius of the `S`-ball the new generators are drawn from.
    #[serde(rename = "N")]
    pub ball_radius: u64,
    pub bound_mode: BoundMode,
}

impl ConstructionParams {
    /// Parameters for depth `target_depth` over a quotient of diameter `n`,
    /// with the smallest `N` the bound mode allows.
    pub fn new(target_depth: u32, n: u32, bound_mode: BoundMode) -> Result<ConstructionParams> {
        let d = slack(target_depth)?;
        let ball_radius = required_ball_radius(n, d, bound_mode)?;
        ConstructionParams::with_ball_radius(target_depth, n, ball_radius, bound_mode)
    }

    pub fn with_ball_radius(
        target_depth: u32,
        n: u32,
        ball_radius: u64,
        bound_mode: BoundMode,
    ) -> Result<ConstructionParams> {
        let d = slack(target_depth)?;
        let required = required_ball_radius(n, d, bound_mode)?;
        if ball_radius < required {
            return Err(Error::Params(format!(
                "N = {ball_radius} is below the {bound_mode} bound {required}"
            )));
        }
        if !length_inequality_holds(n, d, ball_radius) {
            return Err(Error::Verification(format!(
                "N = {ball_radius} fails (n + dN)/(n - d) + 2n + 1 <= N for n = {n}, d = {d}"
            )));
        }
        if ball_radius > u32::MAX as u64 {
            return Err(Error::Overflow { bits: 32 });
        }
        Ok(ConstructionParams {
            target_depth,
            d,
            n,
            ball_radius,
            bound_mode,
        })
    }

    /// Upper bound on the `S`-length of words spelling elements within
    /// `A`-distance `d` of the witness.
    pub fn word_length_limit(&self) -> u64 {
        self.n as u64 + self.d as u64 * self.ball_radius
    }
}

fn slack(target_depth: u32) -> Result<u32> {
    if target_depth < 2 {
        return Err(Error::Params(format!(
            "target depth must be at least 2, got {target_depth}"
        )));
    }
    Ok(target_depth - 1)
}
