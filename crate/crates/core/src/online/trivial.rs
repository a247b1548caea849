use std::sync::Arc;

use crate::error::PlayerError;
use crate::graph::Graph;
use crate::instance::{Action, Op, Request};
use crate::tape::AdviceTape;

use super::{advice_u32, unsupported_cancel, OnlinePlayer};

/// Reads `w = dec(tape)`, then takes each color verbatim from the next `w` bits.
#[derive(Debug, Clone)]
pub struct Trivial {
    width: u32,
}

impl Trivial {
    pub fn new(_graph: Arc<Graph>, tape: &mut AdviceTape) -> Result<Self, PlayerError> {
        let width = tape.read_enc()?;
        if width > 32 {
            return Err(PlayerError::InconsistentAdvice {
                step: 0,
                reason: format!("field width {width} exceeds 32 bits"),
            });
        }
        Ok(Self {
            width: width as u32,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }
}

impl OnlinePlayer for Trivial {
    fn serve(
        &mut self,
        step: usize,
        r: &Request,
        tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError> {
        if let Op::Cancel(_) = r.op {
            return Err(unsupported_cancel("trivial"));
        }
        let raw = tape.read_fixed(self.width)?;
        Ok(Action::Color(advice_u32(raw + 1, step, "color")?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_path, NodeId};

    #[test]
    fn reads_fixed_fields() {
        let g = Arc::new(build_path(1).unwrap());
        let mut tape = AdviceTape::new();
        tape.push_enc(2);
        tape.push_fixed(0, 2);
        tape.push_fixed(1, 2);
        let mut p = Trivial::new(g, &mut tape).unwrap();
        let r = Request::color(NodeId(0));
        assert_eq!(p.serve(0, &r, &mut tape), Ok(Action::Color(1)));
        assert_eq!(p.serve(1, &r, &mut tape), Ok(Action::Color(2)));
        assert!(tape.is_exhausted());
        assert!(matches!(
            p.serve(2, &r, &mut tape),
            Err(PlayerError::Tape(_))
        ));
    }

    #[test]
    fn no_requests_reads_only_the_width() {
        let g = Arc::new(build_path(1).unwrap());
        let mut tape = AdviceTape::new();
        tape.push_enc(3);
        Trivial::new(g, &mut tape).unwrap();
        assert_eq!(tape.high_water(), crate::tape::enc_len(3));
    }
}
