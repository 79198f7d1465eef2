use super::{find_irreducible, FieldElement, FieldKind, FieldSpec, MAX_EXTENSION_DEGREE};
use crate::error::{Error, Result};

/// A degree-2 extension `ext` of `base` with an explicit embedding.
///
/// For F_p the embedding sends a residue to the constant polynomial. For
/// F_{p^k} the generator t of the base is sent to a root of the base
/// modulus inside F_{p^{2k}}.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub base: FieldSpec,
    pub ext: FieldSpec,
    generator_image: Option<FieldElement>,
}

impl QuadraticExtension {
    pub fn new(base: &FieldSpec) -> Result<Self> {
        let (p, k) = match base.kind() {
            FieldKind::Rational => {
                return Err(Error::NoQuadraticExtension(base.to_string()));
            }
            FieldKind::Prime { p } => (*p, 1),
            FieldKind::Extension { p, k, .. } => (*p, *k),
        };
        if 2 * k > MAX_EXTENSION_DEGREE {
            return Err(Error::NoQuadraticExtension(base.to_string()));
        }
        let ext = FieldSpec::extension(p, find_irreducible(p, 2 * k)?)?;
        let generator_image = match base.kind() {
            FieldKind::Extension { modulus, .. } => {
                // k = 2: the base modulus t^2 + m1 t + m0 splits in ext.
                let m0 = ext.from_coeffs(&[modulus[0]]);
                let m1 = ext.from_coeffs(&[modulus[1]]);
                let disc = &m1.square() - &(4 * &m0);
                let (root, _) = disc.sqrt()?;
                let two = ext.from_i64(2);
                Some(&(&root - &m1) / &two)
            }
            _ => None,
        };
        Ok(QuadraticExtension {
            base: base.clone(),
            ext,
            generator_image,
        })
    }

    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        assert_eq!(a.field(), &self.base, "element is not in the base field");
        match &self.generator_image {
            None => self.ext.from_coeffs(&a.coordinates()),
            Some(r) => {
                let mut acc = self.ext.zero();
                for c in a.coordinates().iter().rev() {
                    acc = &(&acc * r) + &self.ext.from_coeffs(&[*c]);
                }
                acc
            }
        }
    }

    /// Inverse of [`embed`](Self::embed) on its image; `None` off the image.
    pub fn retract(&self, a: &FieldElement) -> Option<FieldElement> {
        assert_eq!(a.field(), &self.ext, "element is not in the extension");
        let c = a.coordinates();
        match &self.generator_image {
            None => {
                if c[1..].iter().all(|&x| x == 0) {
                    Some(self.base.from_coeffs(&c[..1]))
                } else {
                    None
                }
            }
            Some(r) => {
                let rc = r.coordinates();
                let p = self.base.characteristic();
                let j = (1..rc.len()).find(|&j| rc[j] != 0)?;
                let fp = FieldSpec::prime(p).ok()?;
                let b = fp.from_coeffs(&[c[j]]) / fp.from_coeffs(&[rc[j]]);
                for i in 1..rc.len() {
                    if fp.from_coeffs(&[c[i]]) != &b * &fp.from_coeffs(&[rc[i]]) {
                        return None;
                    }
                }
                let a0 = &fp.from_coeffs(&[c[0]]) - &(&b * &fp.from_coeffs(&[rc[0]]));
                Some(self.base.from_coeffs(&[a0.coordinates()[0], b.coordinates()[0]]))
            }
        }
    }

    /// The nontrivial automorphism of `ext` over `base`: a ↦ a^|base|.
    pub fn conjugate(&self, a: &FieldElement) -> FieldElement {
        a.pow_big(&self.base.order().expect("finite base"))
    }

    /// Elements of `ext` not in the base field.
    pub fn is_in_base(&self, a: &FieldElement) -> bool {
        self.retract(a).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_base_roundtrip() {
        let base = FieldSpec::prime(7).unwrap();
        let q = base.quadratic_extension().unwrap();
        assert_eq!(q.ext.degree(), 2);
        for a in base.elements() {
            let e = q.embed(&a);
            assert_eq!(q.retract(&e), Some(a.clone()));
            assert_eq!(q.conjugate(&e), e);
        }
        let fixed = q.ext.elements().filter(|x| q.is_in_base(x)).count();
        assert_eq!(fixed, 7);
    }

    #[test]
    fn extension_base_is_a_ring_embedding() {
        let base = FieldSpec::galois(7, 2).unwrap();
        let q = base.quadratic_extension().unwrap();
        assert_eq!(q.ext.degree(), 4);
        let elems: Vec<_> = base.elements().step_by(5).collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(q.embed(&(a * b)), &q.embed(a) * &q.embed(b));
                assert_eq!(q.embed(&(a + b)), &q.embed(a) + &q.embed(b));
            }
            assert_eq!(q.retract(&q.embed(a)), Some(a.clone()));
            assert_eq!(q.conjugate(&q.embed(a)), q.embed(a));
        }
    }

    #[test]
    fn rationals_have_no_tower() {
        assert!(FieldSpec::rational().quadratic_extension().is_err());
        assert!(FieldSpec::galois(3, 3).unwrap().quadratic_extension().is_err());
    }
}
