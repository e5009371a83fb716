//! Mode registry: the protocol's named optical modes and the internal indices
//! each stage of the simulation uses for them.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    /// Alice's first information mode.
    A,
    /// Alice's second information mode.
    APrime,
    /// Bob's information mode.
    B,
    /// Channel modes 1 through 6.
    Channel(u8),
    /// Detector output modes 7 through 12.
    Detector(u8),
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::A => f.write_str("A"),
            ModeLabel::APrime => f.write_str("A'"),
            ModeLabel::B => f.write_str("B"),
            ModeLabel::Channel(k) | ModeLabel::Detector(k) => write!(f, "{k}"),
        }
    }
}

use ModeLabel::*;

/// Mode order of the global input state: information modes, then the channel.
pub const INPUT_ORDER: [ModeLabel; 9] = [
    A,
    APrime,
    B,
    Channel(1),
    Channel(2),
    Channel(3),
    Channel(4),
    Channel(5),
    Channel(6),
];

/// Mode order after the three beam splitters: detectors first, then the outputs.
pub const MIXED_ORDER: [ModeLabel; 9] = [
    Detector(7),
    Detector(8),
    Detector(9),
    Detector(10),
    Detector(11),
    Detector(12),
    Channel(4),
    Channel(5),
    Channel(6),
];

/// Beam splitter wiring: `(information in, channel in, sum out, difference out)`.
pub const BPS_WIRING: [(ModeLabel, ModeLabel, ModeLabel, ModeLabel); 3] = [
    (A, Channel(1), Detector(7), Detector(8)),
    (APrime, Channel(2), Detector(9), Detector(10)),
    (B, Channel(3), Detector(11), Detector(12)),
];

/// Channel pairs sharing one Bell state.
pub const BELL_PAIRS: [(ModeLabel, ModeLabel); 3] = [
    (Channel(1), Channel(4)),
    (Channel(2), Channel(5)),
    (Channel(3), Channel(6)),
];

/// Detector modes in the mixed state, in pattern order.
pub const MEASURED: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// Output modes (4, 5, 6) of the heralded three-mode state.
pub const OUTPUT: [ModeLabel; 3] = [Channel(4), Channel(5), Channel(6)];

pub fn input_index(mode: ModeLabel) -> Option<usize> {
    INPUT_ORDER.iter().position(|&m| m == mode)
}

pub fn mixed_index(mode: ModeLabel) -> Option<usize> {
    MIXED_ORDER.iter().position(|&m| m == mode)
}

/// Index of a mode inside the heralded (4, 5, 6) state.
pub fn output_index(mode: ModeLabel) -> Option<usize> {
    OUTPUT.iter().position(|&m| m == mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_consistent() {
        for (info, chan, sum, diff) in BPS_WIRING {
            assert!(input_index(info).unwrap() < 3);
            assert!(input_index(chan).unwrap() >= 3);
            let (s, d) = (mixed_index(sum).unwrap(), mixed_index(diff).unwrap());
            assert_eq!(d, s + 1);
            assert!(MEASURED.contains(&s) && MEASURED.contains(&d));
        }
        for m in OUTPUT {
            assert_eq!(mixed_index(m).unwrap(), 6 + output_index(m).unwrap());
        }
        assert_eq!(ModeLabel::APrime.to_string(), "A'");
        assert_eq!(ModeLabel::Detector(11).to_string(), "11");
    }
}
