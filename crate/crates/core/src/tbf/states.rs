use std::fmt;
use std::str::FromStr;

/// Variable node state: a decision bit plus a strength bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum VarState {
    StrongZero = 0,
    WeakZero = 1,
    WeakOne = 2,
    StrongOne = 3,
}

impl VarState {
    pub const ALL: [VarState; 4] = [
        VarState::StrongZero,
        VarState::WeakZero,
        VarState::WeakOne,
        VarState::StrongOne,
    ];

    #[inline]
    pub fn from_index(i: u8) -> VarState {
        Self::ALL[i as usize & 3]
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Decision bit.
    #[inline]
    pub fn bit(self) -> u8 {
        (self as u8) >> 1
    }

    /// Swaps 0 and 1, keeping the strength.
    #[inline]
    pub fn complement(self) -> VarState {
        Self::from_index(3 - self as u8)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            VarState::StrongZero => "0s",
            VarState::WeakZero => "0w",
            VarState::WeakOne => "1w",
            VarState::StrongOne => "1s",
        }
    }
}

impl fmt::Display for VarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for VarState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0s" => Ok(VarState::StrongZero),
            "0w" => Ok(VarState::WeakZero),
            "1w" => Ok(VarState::WeakOne),
            "1s" => Ok(VarState::StrongOne),
            _ => Err(format!("unknown variable state {s:?} (expected 0s, 0w, 1w or 1s)")),
        }
    }
}

/// Check node state: satisfied or not, and whether that changed in the last
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum CheckState {
    PrevSat = 0,
    NewSat = 1,
    PrevUnsat = 2,
    NewUnsat = 3,
}

impl CheckState {
    pub const ALL: [CheckState; 4] = [
        CheckState::PrevSat,
        CheckState::NewSat,
        CheckState::PrevUnsat,
        CheckState::NewUnsat,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn satisfied(self) -> bool {
        (self as u8) < 2
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CheckState::PrevSat => "0p",
            CheckState::NewSat => "0n",
            CheckState::PrevUnsat => "1p",
            CheckState::NewUnsat => "1n",
        }
    }
}

impl fmt::Display for CheckState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for CheckState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0p" => Ok(CheckState::PrevSat),
            "0n" => Ok(CheckState::NewSat),
            "1p" => Ok(CheckState::PrevUnsat),
            "1n" => Ok(CheckState::NewUnsat),
            _ => Err(format!("unknown check state {s:?} (expected 0p, 0n, 1p or 1n)")),
        }
    }
}

/// Check update from the previous and current syndrome bits.
#[inline]
pub fn check_update(s_prev: u8, s_cur: u8) -> CheckState {
    match (s_prev & 1, s_cur & 1) {
        (0, 0) => CheckState::PrevSat,
        (0, _) => CheckState::NewUnsat,
        (_, 0) => CheckState::NewSat,
        _ => CheckState::PrevUnsat,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_an_involution() {
        for w in VarState::ALL {
            assert_eq!(w.complement().complement(), w);
            assert_eq!(w.complement().bit(), 1 - w.bit());
        }
        assert_eq!(VarState::StrongZero.complement(), VarState::StrongOne);
        assert_eq!(VarState::WeakZero.complement(), VarState::WeakOne);
    }

    #[test]
    fn satisfied_projection() {
        let sat: Vec<bool> = CheckState::ALL.iter().map(|c| c.satisfied()).collect();
        assert_eq!(sat, vec![true, true, false, false]);
    }

    #[test]
    fn symbols_round_trip() {
        for w in VarState::ALL {
            assert_eq!(w.symbol().parse::<VarState>().unwrap(), w);
        }
        for c in CheckState::ALL {
            assert_eq!(c.symbol().parse::<CheckState>().unwrap(), c);
        }
        assert!("2s".parse::<VarState>().is_err());
    }
}
