/// Planar stereo block of `f32` samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StereoBuffer {
    pub left: Vec<f32>,
    pub right: Vec<f32>,
}

impl StereoBuffer {
    pub fn new(frames: usize) -> Self {
        Self {
            left: vec![0.0; frames],
            right: vec![0.0; frames],
        }
    }

    pub fn frames(&self) -> usize {
        self.left.len()
    }

    pub fn clear(&mut self) {
        self.left.fill(0.0);
        self.right.fill(0.0);
    }

    pub fn copy_from(&mut self, other: &StereoBuffer) {
        self.left.copy_from_slice(&other.left);
        self.right.copy_from_slice(&other.right);
    }

    /// Writes the block as interleaved `L R L R ...` frames.
    pub fn write_interleaved(&self, out: &mut [f32]) {
        for (frame, (l, r)) in out
            .chunks_exact_mut(2)
            .zip(self.left.iter().zip(self.right.iter()))
        {
            frame[0] = *l;
            frame[1] = *r;
        }
    }

    pub fn interleaved(&self) -> Vec<f32> {
        let mut out = vec![0.0; self.frames() * 2];
        self.write_interleaved(&mut out);
        out
    }
}
