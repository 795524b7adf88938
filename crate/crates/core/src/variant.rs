//! Internal switches selecting an operation's variant. The public API always
//! uses the first variant; the others exist for fault injection in the
//! verification suites.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Merge {
    Max,
    Min,
}

impl Merge {
    pub(crate) fn apply<S: Ord>(self, a: S, b: S) -> S {
        match self {
            Merge::Max => a.max(b),
            Merge::Min => a.min(b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Threshold {
    /// `value >= t`
    Inclusive,
    /// `value > t`
    Strict,
}

impl Threshold {
    #[inline]
    pub(crate) fn passes<S: Ord>(self, value: S, t: S) -> bool {
        match self {
            Threshold::Inclusive => value >= t,
            Threshold::Strict => value > t,
        }
    }
}

/// Variant selection for every switchable operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Kernel {
    pub merge: Merge,
    pub threshold: Threshold,
    /// Enumerate hull weights on `1..=n` instead of `0..=n`.
    pub skip_zero_weight: bool,
}

impl Kernel {
    pub(crate) const REFERENCE: Kernel = Kernel {
        merge: Merge::Max,
        threshold: Threshold::Inclusive,
        skip_zero_weight: false,
    };
}
