//! Generalized Chinese remainder solver for non-coprime moduli.

use super::{egcd, gcd, lcm, RingElem, RingError, RingSpec};

/// `x ≡ residue (mod modulus)`. A zero modulus means `x = residue`; a unit
/// modulus imposes nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub residue: RingElem,
    pub modulus: RingElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem {
    ring: RingSpec,
    conditions: Vec<Congruence>,
}

impl CongruenceSystem {
    pub fn new(ring: RingSpec) -> Self {
        CongruenceSystem {
            ring,
            conditions: Vec::new(),
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn push(&mut self, residue: RingElem, modulus: RingElem) -> Result<(), RingError> {
        let anchor = self.ring.zero();
        anchor.same_ring(&residue)?;
        anchor.same_ring(&modulus)?;
        self.conditions.push(Congruence { residue, modulus });
        Ok(())
    }

    pub fn with(mut self, residue: RingElem, modulus: RingElem) -> Result<Self, RingError> {
        self.push(residue, modulus)?;
        Ok(self)
    }

    pub fn conditions(&self) -> &[Congruence] {
        &self.conditions
    }

    pub fn is_satisfied_by(&self, x: &RingElem) -> bool {
        self.conditions
            .iter()
            .all(|c| c.modulus.divides(&(x - &c.residue)))
    }

    /// First pair `(i, j)`, `i < j`, violating `a_i ≡ a_j (mod gcd(m_i, m_j))`.
    fn conflicting_pair(&self, upto: usize) -> Option<(usize, usize)> {
        for j in 0..=upto {
            for i in 0..j {
                let (a, b) = (&self.conditions[i], &self.conditions[j]);
                let g = gcd(&a.modulus, &b.modulus).ok()?;
                if !g.divides(&(&a.residue - &b.residue)) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Canonical solution of a congruence system: reduced modulo the lcm of all
/// moduli, or the forced value when some modulus is zero. The empty system
/// yields zero.
pub fn crt_solve(sys: &CongruenceSystem) -> Result<RingElem, RingError> {
    let ring = sys.ring;
    // invariant: the solutions so far are exactly x + (m)
    let mut x = ring.zero();
    let mut m = ring.one();
    for (idx, c) in sys.conditions.iter().enumerate() {
        if c.modulus.is_unit() {
            continue;
        }
        let (g, s, _) = egcd(&m, &c.modulus)?;
        let diff = &c.residue - &x;
        let Some(step) = diff.div_exact(&g) else {
            let (first, second) = sys.conflicting_pair(idx).unwrap_or((0, idx));
            return Err(RingError::IncompatibleSystem { first, second });
        };
        let new_m = lcm(&m, &c.modulus)?;
        // x + m*s*(a - x)/g satisfies both when g | a - x
        x = (&x + &(&(&m * &s) * &step)).reduce_mod(&new_m);
        m = new_m;
    }
    Ok(x.reduce_mod(&m))
}
