use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::align::AlignParams;
use crate::scalar::Scalar;

/// Which guard predicates the ranking favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// `Is` predicates are never generated.
    NoFeature,
    /// `IsToken` outranks `Is`.
    Token,
    /// `Is` outranks `IsToken`.
    Feature,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::NoFeature, Variant::Token, Variant::Feature];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::NoFeature => "nofeature",
            Variant::Token => "token",
            Variant::Feature => "feature",
        }
    }

    pub fn allows_features(self) -> bool {
        self != Variant::NoFeature
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown variant `{s}` (expected nofeature, token or feature)"))
    }
}

/// Search and ranking parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig<S> {
    pub variant: Variant,
    /// Base score per operator name; missing names score zero.
    pub op_scores: BTreeMap<String, S>,
    /// Subtracted once per unit of `|offset|`.
    pub offset_penalty: S,
    /// Subtracted once per literal symbol, feature name or tag.
    pub constant_penalty: S,
    /// Subtracted once per AST node.
    pub length_penalty: S,
    /// Offsets range over `-window.0 ..= window.1`.
    pub window: (u32, u32),
    pub top_k: usize,
    pub max_passes: usize,
    pub seed: u64,
    pub samples_per_iteration: usize,
    /// Longest guard conjunction the search builds.
    pub max_guards: usize,
    pub align: AlignParams<S>,
}

impl<S: Scalar> SynthConfig<S> {
    pub fn new(variant: Variant) -> Self {
        let (token, feature) = match variant {
            Variant::Feature => (1, 2),
            Variant::Token | Variant::NoFeature => (2, 1),
        };
        let op_scores =
            BTreeMap::from([("IsToken".to_string(), S::from_int(token)), ("Is".to_string(), S::from_int(feature))]);
        SynthConfig {
            variant,
            op_scores,
            offset_penalty: S::ratio(1, 2),
            constant_penalty: S::ratio(1, 10),
            length_penalty: S::ratio(1, 2),
            window: (3, 3),
            top_k: 10,
            max_passes: 5,
            seed: 0,
            samples_per_iteration: 20,
            max_guards: 3,
            align: AlignParams::default(),
        }
    }

    pub fn op_score(&self, op: &str) -> S {
        self.op_scores.get(op).copied().unwrap_or_else(S::zero)
    }

    /// Every offset in the window, nearest first, negative before positive.
    pub fn offsets(&self) -> Vec<i32> {
        let (l, r) = (self.window.0 as i32, self.window.1 as i32);
        let mut out = vec![0];
        for d in 1..=l.max(r) {
            if d <= l {
                out.push(-d);
            }
            if d <= r {
                out.push(d);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.top_k == 0 {
            return Err("top_k must be at least 1".into());
        }
        if self.max_passes == 0 {
            return Err("max_passes must be at least 1".into());
        }
        if self.samples_per_iteration == 0 {
            return Err("samples_per_iteration must be at least 1".into());
        }
        Ok(())
    }
}

impl<S: Scalar> Default for SynthConfig<S> {
    fn default() -> Self {
        SynthConfig::new(Variant::Feature)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SynthConfig::<f64>::default();
        assert_eq!(c.variant, Variant::Feature);
        assert_eq!((c.window, c.top_k, c.max_passes, c.samples_per_iteration, c.seed), ((3, 3), 10, 5, 20, 0));
        assert_eq!(c.op_score("Is"), 2.0);
        assert_eq!(c.op_score("IsToken"), 1.0);
        assert_eq!(SynthConfig::<f64>::new(Variant::Token).op_score("IsToken"), 2.0);
        assert_eq!(c.op_score("Identity"), 0.0);
    }

    #[test]
    fn offsets_cover_the_window() {
        let mut c = SynthConfig::<f64>::default();
        c.window = (1, 2);
        assert_eq!(c.offsets(), vec![0, -1, 1, 2]);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>(), Ok(v));
        }
        assert!("features".parse::<Variant>().is_err());
    }
}
