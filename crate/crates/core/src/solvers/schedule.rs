use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A parameter sequence indexed by the iteration counter `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `c` for every `n`.
    Constant(f64),
    /// `c / n`.
    Harmonic(f64),
    /// `c / n^p`.
    ScaledHarmonic { scale: f64, power: f64 },
    /// Explicit values for `n = 1, 2, …`; the last value repeats past the end.
    List(Vec<f64>),
}

/// The parameter a schedule feeds, each with its admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Step size `λₙ`, in `(0, 2)`.
    StepSize,
    /// Inertial weight `θₙ`, in `[0, 1)`.
    Inertia,
    /// Relaxation `αₙ`, in `(0, 1)`.
    Relaxation,
    /// Anchor weight `βₙ` of the contraction, in `(0, 1)`.
    Anchor,
}

impl Role {
    /// `(lower, lower_inclusive, upper, upper_inclusive)`.
    fn bounds(self) -> (f64, bool, f64, bool) {
        match self {
            Role::StepSize => (0.0, false, 2.0, false),
            Role::Inertia => (0.0, true, 1.0, false),
            Role::Relaxation | Role::Anchor => (0.0, false, 1.0, false),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::StepSize => "lambda",
            Role::Inertia => "theta",
            Role::Relaxation => "alpha",
            Role::Anchor => "beta",
        }
    }

    pub fn describe_range(self) -> String {
        let (lo, lo_inc, hi, hi_inc) = self.bounds();
        format!(
            "{}{lo}, {hi}{}",
            if lo_inc { '[' } else { '(' },
            if hi_inc { ']' } else { ')' }
        )
    }

    pub(crate) fn admits(self, v: f64) -> bool {
        let (lo, lo_inc, hi, hi_inc) = self.bounds();
        let above = if lo_inc { v >= lo } else { v > lo };
        let below = if hi_inc { v <= hi } else { v < hi };
        above && below
    }
}

impl Schedule {
    pub fn constant(c: f64) -> Self {
        Schedule::Constant(c)
    }

    pub fn harmonic(c: f64) -> Self {
        Schedule::Harmonic(c)
    }

    /// Value at iteration `n`; `n = 0` is treated as `n = 1`.
    pub fn value(&self, n: usize) -> f64 {
        let n = n.max(1);
        match self {
            Schedule::Constant(c) => *c,
            Schedule::Harmonic(c) => c / n as f64,
            Schedule::ScaledHarmonic { scale, power } => scale / (n as f64).powf(*power),
            Schedule::List(vals) => vals[(n - 1).min(vals.len() - 1)],
        }
    }

    /// Smallest value over `n ≥ 1` (an infimum for decaying rules).
    pub fn infimum(&self) -> f64 {
        match self {
            Schedule::Constant(c) => *c,
            Schedule::Harmonic(c) => c.min(0.0),
            Schedule::ScaledHarmonic { scale, power } => {
                if *power > 0.0 {
                    scale.min(0.0)
                } else {
                    *scale
                }
            }
            Schedule::List(vals) => vals.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    /// Largest value over `n ≥ 1`.
    pub fn supremum(&self) -> f64 {
        match self {
            Schedule::Constant(c) => *c,
            Schedule::Harmonic(c) => c.max(0.0),
            Schedule::ScaledHarmonic { scale, power } => {
                if *power >= 0.0 {
                    scale.max(0.0)
                } else {
                    f64::INFINITY
                }
            }
            Schedule::List(vals) => vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Whether the infimum is actually attained (it is not for `c/n`, `c > 0`).
    fn infimum_attained(&self) -> bool {
        match self {
            Schedule::Constant(_) | Schedule::List(_) => true,
            Schedule::Harmonic(c) => *c <= 0.0,
            Schedule::ScaledHarmonic { scale, power } => *power <= 0.0 || *scale <= 0.0,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Schedule::Constant(_) => true,
            Schedule::List(v) => v.iter().all(|x| *x == v[0]),
            _ => false,
        }
    }

    /// `lim βₙ = 0`.
    pub fn tends_to_zero(&self) -> bool {
        match self {
            Schedule::Constant(c) => *c == 0.0,
            Schedule::Harmonic(_) => true,
            Schedule::ScaledHarmonic { scale, power } => *scale == 0.0 || *power > 0.0,
            Schedule::List(v) => *v.last().expect("non-empty list") == 0.0,
        }
    }

    /// `Σ βₙ = ∞` for a nonnegative sequence.
    pub fn sum_diverges(&self) -> bool {
        match self {
            Schedule::Constant(c) => *c > 0.0,
            Schedule::Harmonic(c) => *c > 0.0,
            Schedule::ScaledHarmonic { scale, power } => *scale > 0.0 && *power <= 1.0,
            Schedule::List(v) => *v.last().expect("non-empty list") > 0.0,
        }
    }

    /// Identically zero from some index on.
    pub fn eventually_zero(&self) -> bool {
        match self {
            Schedule::Constant(c) | Schedule::Harmonic(c) => *c == 0.0,
            Schedule::ScaledHarmonic { scale, .. } => *scale == 0.0,
            Schedule::List(v) => *v.last().expect("non-empty list") == 0.0,
        }
    }

    fn check_well_formed(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        let ok = match self {
            Schedule::Constant(c) | Schedule::Harmonic(c) => finite(*c),
            Schedule::ScaledHarmonic { scale, power } => finite(*scale) && finite(*power),
            Schedule::List(v) => {
                if v.is_empty() {
                    return invalid("schedule list must not be empty");
                }
                v.iter().all(|x| finite(*x))
            }
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("schedule `{self}` has non-finite parameters"))
        }
    }

    /// Checks that every emitted value lies in the range of `role`.
    pub fn check_role(&self, role: Role) -> Result<()> {
        self.check_well_formed()?;
        let (lo, _, _, _) = role.bounds();
        let inf = self.infimum();
        let sup = self.supremum();
        // An unattained infimum only needs to sit at or above the lower bound.
        let inf_ok = if self.infimum_attained() {
            role.admits(inf)
        } else {
            inf >= lo
        };
        if !inf_ok || !role.admits(sup) {
            return Err(Error::Config(format!(
                "{} schedule `{self}` leaves {}",
                role.name(),
                role.describe_range()
            )));
        }
        Ok(())
    }

    /// Builds a schedule and checks it against the range of `role`.
    pub fn for_role(self, role: Role) -> Result<Self> {
        self.check_role(role)?;
        Ok(self)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant(c) => write!(f, "const:{c}"),
            Schedule::Harmonic(c) => write!(f, "harmonic:{c}"),
            Schedule::ScaledHarmonic { scale, power } => {
                write!(f, "scaled-harmonic:{scale},{power}")
            }
            Schedule::List(v) => {
                write!(f, "list:")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// Accepts `const:c`, `harmonic:c`, `scaled-harmonic:c,p`, `list:v1,v2,…`,
    /// or a bare number as shorthand for a constant.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number `{t}` in schedule `{s}`")))
        };
        let Some((kind, rest)) = s.split_once(':') else {
            return Ok(Schedule::Constant(num(s)?));
        };
        let sched = match kind.trim() {
            "const" | "constant" => Schedule::Constant(num(rest)?),
            "harmonic" => Schedule::Harmonic(num(rest)?),
            "scaled-harmonic" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 2 {
                    return invalid(format!("`{s}`: scaled-harmonic takes scale,power"));
                }
                Schedule::ScaledHarmonic {
                    scale: num(parts[0])?,
                    power: num(parts[1])?,
                }
            }
            "list" => Schedule::List(rest.split(',').map(num).collect::<Result<_>>()?),
            other => return invalid(format!("unknown schedule kind `{other}`")),
        };
        sched.check_well_formed()?;
        Ok(sched)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_by_index() {
        assert_eq!(Schedule::Constant(0.3).value(17), 0.3);
        assert_eq!(Schedule::Harmonic(0.1).value(4), 0.025);
        assert_eq!(Schedule::Harmonic(0.1).value(0), 0.1);
        let s = Schedule::ScaledHarmonic {
            scale: 1.0,
            power: 2.0,
        };
        assert_eq!(s.value(3), 1.0 / 9.0);
        let l = Schedule::List(vec![0.5, 0.25]);
        assert_eq!(l.value(1), 0.5);
        assert_eq!(l.value(2), 0.25);
        assert_eq!(l.value(100), 0.25);
    }

    #[test]
    fn parse_and_display() {
        for s in [
            "const:0.5",
            "harmonic:0.1",
            "scaled-harmonic:0.5,0.75",
            "list:0.1,0.2,0.3",
        ] {
            let parsed: Schedule = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert_eq!(
            "0.25".parse::<Schedule>().unwrap(),
            Schedule::Constant(0.25)
        );
        assert!("geometric:0.5".parse::<Schedule>().is_err());
        assert!("list:".parse::<Schedule>().is_err());
        assert!("const:nan".parse::<Schedule>().is_err());
    }

    #[test]
    fn role_ranges() {
        assert!(Schedule::Constant(0.5).for_role(Role::Relaxation).is_ok());
        assert!(Schedule::Constant(1.0).for_role(Role::Relaxation).is_err());
        assert!(Schedule::Constant(0.0).for_role(Role::Relaxation).is_err());
        assert!(Schedule::Constant(0.0).for_role(Role::Inertia).is_ok());
        assert!(Schedule::Constant(1.0).for_role(Role::Inertia).is_err());
        assert!(Schedule::Harmonic(0.1).for_role(Role::Anchor).is_ok());
        assert!(Schedule::Harmonic(1.0).for_role(Role::Anchor).is_err());
        assert!(Schedule::Harmonic(0.0).for_role(Role::Anchor).is_err());
        assert!(Schedule::List(vec![0.1, 0.9])
            .for_role(Role::Anchor)
            .is_ok());
        assert!(Schedule::List(vec![0.1, 1.2])
            .for_role(Role::Anchor)
            .is_err());
        assert!(Schedule::Constant(1.99).for_role(Role::StepSize).is_ok());
        assert!(Schedule::Constant(2.0).for_role(Role::StepSize).is_err());
    }

    #[test]
    fn asymptotics() {
        assert!(Schedule::Harmonic(0.1).tends_to_zero());
        assert!(Schedule::Harmonic(0.1).sum_diverges());
        assert!(!Schedule::Constant(0.5).tends_to_zero());
        assert!(Schedule::Constant(0.5).sum_diverges());
        let fast = Schedule::ScaledHarmonic {
            scale: 0.5,
            power: 2.0,
        };
        assert!(fast.tends_to_zero() && !fast.sum_diverges());
        assert!(Schedule::List(vec![0.5, 0.0]).eventually_zero());
    }
}
