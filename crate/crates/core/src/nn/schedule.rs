use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Linear decay from `start` at episode 1 to `end` at episode `horizon`,
/// constant afterwards. Used for both the learning rate and exploration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSchedule {
    pub start: f64,
    pub end: f64,
    pub horizon: usize,
}

pub type LrSchedule = LinearSchedule;

impl LinearSchedule {
    pub fn new(start: f64, end: f64, horizon: usize) -> Self {
        Self { start, end, horizon }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, value, 1)
    }

    /// Learning-rate schedules must decay towards a positive floor.
    pub fn validate_lr(&self) -> Result<()> {
        if !(self.start >= self.end && self.end > 0.0) || self.horizon < 1 {
            return Err(Error::config(format!(
                "learning rate schedule {self:?} needs lr_start >= lr_end > 0 and horizon >= 1"
            )));
        }
        Ok(())
    }

    /// Value at 1-based `episode`.
    pub fn at(&self, episode: usize) -> f64 {
        let episode = episode.max(1);
        if episode >= self.horizon || self.horizon <= 1 {
            return self.end;
        }
        let frac = (episode - 1) as f64 / (self.horizon - 1) as f64;
        self.start + (self.end - self.start) * frac
    }
}

/// Learning rate of `schedule` at `episode`.
pub fn lr_at(schedule: &LrSchedule, episode: usize) -> f64 {
    schedule.at(episode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lr_endpoints_and_midpoint() {
        let s = LrSchedule::new(0.01, 0.001, 250);
        assert_eq!(lr_at(&s, 1), 0.01);
        assert_eq!(lr_at(&s, 250), 0.001);
        assert_eq!(lr_at(&s, 400), 0.001);
        let odd = LrSchedule::new(0.01, 0.001, 251);
        assert!((lr_at(&odd, 126) - 0.0055).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(LrSchedule::new(0.01, 0.001, 250).validate_lr().is_ok());
        assert!(LrSchedule::new(0.001, 0.01, 250).validate_lr().is_err());
        assert!(LrSchedule::new(0.01, 0.0, 250).validate_lr().is_err());
    }
}
