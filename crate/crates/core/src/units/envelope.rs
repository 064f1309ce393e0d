/// Fixed linear attack time.
pub const ATTACK_SECONDS: f32 = 0.005;

/// Release times at or above this hold the sound until the next trigger.
pub const RELEASE_HOLD_SECONDS: f32 = 19.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Idle,
    Attack,
    Release,
}

/// Two-stage attack/release envelope excited by triggers.
///
/// After the attack the level sits at exactly `1.0`; with a finite release
/// time it then decays exponentially, reaching -60 dB after the release time.
#[derive(Debug, Clone)]
pub struct Envelope {
    sample_rate: f32,
    stage: Stage,
    level: f32,
    attack_step: f32,
}

impl Envelope {
    pub fn new(sample_rate: u32) -> Self {
        let sample_rate = sample_rate as f32;
        Self {
            sample_rate,
            stage: Stage::Idle,
            level: 0.0,
            attack_step: 1.0 / (ATTACK_SECONDS * sample_rate),
        }
    }

    pub fn trigger(&mut self) {
        self.stage = Stage::Attack;
    }

    pub fn reset(&mut self) {
        self.stage = Stage::Idle;
        self.level = 0.0;
    }

    pub fn level(&self) -> f32 {
        self.level
    }

    pub fn is_idle(&self) -> bool {
        self.stage == Stage::Idle
    }

    #[inline]
    pub fn next(&mut self, release_seconds: f32) -> f32 {
        match self.stage {
            Stage::Idle => {}
            Stage::Attack => {
                self.level += self.attack_step;
                if self.level >= 1.0 {
                    self.level = 1.0;
                    self.stage = Stage::Release;
                }
            }
            Stage::Release => {
                if release_seconds < RELEASE_HOLD_SECONDS {
                    // 10^(-3 / (t * sr)) per sample.
                    let coeff = (-6.907_755_f32 / (release_seconds * self.sample_rate)).exp();
                    self.level *= coeff;
                    if self.level < 1e-6 {
                        self.level = 0.0;
                        self.stage = Stage::Idle;
                    }
                }
            }
        }
        self.level
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idle_until_triggered() {
        let mut env = Envelope::new(44100);
        assert!((0..1000).all(|_| env.next(1.0) == 0.0));
    }

    #[test]
    fn attack_lands_exactly_on_unity_and_holds() {
        let mut env = Envelope::new(44100);
        env.trigger();
        let attack = (ATTACK_SECONDS * 44100.0).ceil() as usize + 1;
        for _ in 0..attack {
            env.next(20.0);
        }
        assert!((0..44100).all(|_| env.next(20.0) == 1.0));
    }

    #[test]
    fn release_reaches_minus_sixty_db() {
        let mut env = Envelope::new(1000);
        env.trigger();
        while env.level() < 1.0 {
            env.next(1.0);
        }
        for _ in 0..1000 {
            env.next(1.0);
        }
        assert!((env.level() - 1e-3).abs() < 1e-4, "{}", env.level());
    }
}
