//! Element algebra for the supported groups.
//!
//! Every group on the menu has a decidable word problem: elements are stored
//! in a canonical form, so equality, hashing and ordering are structural.

mod element;
mod gens;
pub mod json;
mod parse;
mod table;

use std::fmt;
use std::sync::Arc;

pub use element::Element;
pub use gens::{GeneratingSet, Generator, Letter, Word};
pub use parse::split_top_level;
pub use table::{TableGroup, EXHAUSTIVE_AXIOM_LIMIT};

use crate::error::{Error, Result};

pub const DEFAULT_INT_BITS: u32 = 64;

/// One of the concrete groups the library knows how to compute in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Group {
    /// The integers under addition.
    IntegerLine { bits: u32 },
    /// `Z^rank` under addition.
    IntegerGrid { rank: usize, bits: u32 },
    /// `Z / order`.
    Cyclic { order: u64 },
    /// Symmetries of a regular `sides`-gon; order `2 * sides`.
    Dihedral { sides: u64 },
    /// `Z_2 wr Z`: finitely supported lamp configurations and a cursor.
    Lamplighter { bits: u32 },
    Table(Arc<TableGroup>),
}

impl Group {
    pub fn integers() -> Group {
        Group::IntegerLine {
            bits: DEFAULT_INT_BITS,
        }
    }

    pub fn grid(rank: usize) -> Result<Group> {
        if rank == 0 {
            return Err(Error::InvalidGroup("grid rank must be at least 1".into()));
        }
        Ok(Group::IntegerGrid {
            rank,
            bits: DEFAULT_INT_BITS,
        })
    }

    pub fn cyclic(order: u64) -> Result<Group> {
        if order == 0 {
            return Err(Error::InvalidGroup("cyclic order must be at least 1".into()));
        }
        Ok(Group::Cyclic { order })
    }

    pub fn dihedral(sides: u64) -> Result<Group> {
        if sides < 3 {
            return Err(Error::InvalidGroup("dihedral groups need at least 3 sides".into()));
        }
        if sides > u64::MAX / 2 {
            return Err(Error::InvalidGroup("dihedral order overflows".into()));
        }
        Ok(Group::Dihedral { sides })
    }

    pub fn lamplighter() -> Group {
        Group::Lamplighter {
            bits: DEFAULT_INT_BITS,
        }
    }

    pub fn table(table: TableGroup) -> Group {
        Group::Table(Arc::new(table))
    }

    /// Caps integer payloads at `bits`-bit signed magnitude. Only affects the
    /// integer-valued variants.
    pub fn with_int_bits(self, bits: u32) -> Result<Group> {
        if !(2..=64).contains(&bits) {
            return Err(Error::InvalidGroup(format!("integer width {bits} not in 2..=64")));
        }
        Ok(match self {
            Group::IntegerLine { .. } => Group::IntegerLine { bits },
            Group::IntegerGrid { rank, .. } => Group::IntegerGrid { rank, bits },
            Group::Lamplighter { .. } => Group::Lamplighter { bits },
            other => other,
        })
    }

    /// Parses descriptors such as `zz`, `zz^3`, `cyclic:10`, `dihedral:6`,
    /// `lamplighter`.
    pub fn parse(spec: &str) -> Result<Group> {
        parse::parse_group(spec)
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Group::Cyclic { order } => Some(*order),
            Group::Dihedral { sides } => Some(2 * sides),
            Group::Table(t) => Some(t.order() as u64),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::IntegerLine { .. } => Element::Int(0),
            Group::IntegerGrid { rank, .. } => Element::vector(vec![0; *rank]),
            Group::Cyclic { .. } => Element::Residue(0),
            Group::Dihedral { .. } => Element::Dihedral {
                rotation: 0,
                reflection: false,
            },
            Group::Lamplighter { .. } => Element::Lamplighter {
                lamps: Box::new([]),
                cursor: 0,
            },
            Group::Table(t) => Element::Table(t.identity()),
        }
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    /// The conventional generators: `1`, unit vectors, `1`, `{r1, s0}`,
    /// `{t, a}`. Table groups have none.
    pub fn standard_generators(&self) -> Result<Vec<Element>> {
        Ok(match self {
            Group::IntegerLine { .. } => vec![Element::Int(1)],
            Group::IntegerGrid { rank, .. } => (0..*rank)
                .map(|i| {
                    let mut v = vec![0; *rank];
                    v[i] = 1;
                    Element::vector(v)
                })
                .collect(),
            Group::Cyclic { .. } => vec![Element::Residue(1)],
            Group::Dihedral { .. } => vec![
                Element::Dihedral {
                    rotation: 1,
                    reflection: false,
                },
                Element::Dihedral {
                    rotation: 0,
                    reflection: true,
                },
            ],
            Group::Lamplighter { .. } => vec![lamplighter_t(), lamplighter_a()],
            Group::Table(_) => {
                return Err(Error::InvalidGenerators(
                    "table groups have no standard generators".into(),
                ))
            }
        })
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (Group::IntegerLine { bits }, Element::Int(v)) => in_range(*bits, *v),
            (Group::IntegerGrid { rank, bits }, Element::Vector(c)) => {
                c.len() == *rank && c.iter().all(|v| in_range(*bits, *v))
            }
            (Group::Cyclic { order }, Element::Residue(r)) => r < order,
            (Group::Dihedral { sides }, Element::Dihedral { rotation, .. }) => rotation < sides,
            (Group::Lamplighter { bits }, Element::Lamplighter { lamps, cursor }) => {
                in_range(*bits, *cursor)
                    && lamps.iter().all(|p| in_range(*bits, *p))
                    && lamps.windows(2).all(|w| w[0] < w[1])
            }
            (Group::Table(t), Element::Table(id)) => *id < t.order(),
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: x.to_string(),
                group: self.to_string(),
            })
        }
    }

    /// The group product `x * y`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (Group::IntegerLine { bits }, Element::Int(a), Element::Int(b)) => {
                Element::Int(checked_add(*bits, *a, *b)?)
            }
            (Group::IntegerGrid { bits, .. }, Element::Vector(a), Element::Vector(b)) => {
                let coords = a
                    .iter()
                    .zip(b.iter())
                    .map(|(p, q)| checked_add(*bits, *p, *q))
                    .collect::<Result<Vec<_>>>()?;
                Element::vector(coords)
            }
            (Group::Cyclic { order }, Element::Residue(a), Element::Residue(b)) => {
                Element::Residue(add_mod(*a, *b, *order))
            }
            (
                Group::Dihedral { sides },
                Element::Dihedral {
                    rotation: r1,
                    reflection: s1,
                },
                Element::Dihedral {
                    rotation: r2,
                    reflection: s2,
                },
            ) => {
                // sigma * rho = rho^-1 * sigma
                let r2 = if *s1 { (sides - r2) % sides } else { *r2 };
                Element::Dihedral {
                    rotation: add_mod(*r1, r2, *sides),
                    reflection: s1 ^ s2,
                }
            }
            (
                Group::Lamplighter { bits },
                Element::Lamplighter {
                    lamps: f,
                    cursor: c,
                },
                Element::Lamplighter {
                    lamps: g,
                    cursor: d,
                },
            ) => {
                // (f, c)(g, d) = (f + shift_c(g), c + d)
                let shifted = g
                    .iter()
                    .map(|p| checked_add(*bits, *p, *c))
                    .collect::<Result<Vec<_>>>()?;
                Element::Lamplighter {
                    lamps: symmetric_difference(f, &shifted).into_boxed_slice(),
                    cursor: checked_add(*bits, *c, *d)?,
                }
            }
            (Group::Table(t), Element::Table(a), Element::Table(b)) => Element::Table(t.product(*a, *b)),
            _ => unreachable!("membership checked above"),
        })
    }

    /// Integer ranges are symmetric, so only lamplighter lamp shifts can
    /// overflow; any other error means `x` is foreign.
    pub fn invert(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(match (self, x) {
            (Group::IntegerLine { .. }, Element::Int(a)) => Element::Int(-a),
            (Group::IntegerGrid { .. }, Element::Vector(a)) => {
                Element::vector(a.iter().map(|v| -v).collect())
            }
            (Group::Cyclic { order }, Element::Residue(a)) => Element::Residue((order - a) % order),
            (
                Group::Dihedral { sides },
                Element::Dihedral {
                    rotation,
                    reflection,
                },
            ) => {
                if *reflection {
                    x.clone()
                } else {
                    Element::Dihedral {
                        rotation: (sides - rotation) % sides,
                        reflection: false,
                    }
                }
            }
            (Group::Lamplighter { bits }, Element::Lamplighter { lamps, cursor }) => {
                // (f, c)^-1 = (shift_{-c}(f), -c). Lamp positions can leave
                // the integer range here even though the cursor cannot.
                let lamps = lamps
                    .iter()
                    .map(|p| checked_add(*bits, *p, -cursor))
                    .collect::<Result<Vec<_>>>()?;
                Element::Lamplighter {
                    lamps: lamps.into_boxed_slice(),
                    cursor: -cursor,
                }
            }
            (Group::Table(t), Element::Table(a)) => Element::Table(t.inverse(*a)),
            _ => unreachable!("membership checked above"),
        })
    }

    /// `x^-1 * y`.
    pub fn left_divide(&self, x: &Element, y: &Element) -> Result<Element> {
        self.multiply(&self.invert(x)?, y)
    }

    /// Dense index of an element of a finite group, in `0..order`.
    pub fn index_of(&self, x: &Element) -> Option<u64> {
        if !self.contains(x) {
            return None;
        }
        match (self, x) {
            (Group::Cyclic { .. }, Element::Residue(r)) => Some(*r),
            (
                Group::Dihedral { sides },
                Element::Dihedral {
                    rotation,
                    reflection,
                },
            ) => Some(rotation + if *reflection { *sides } else { 0 }),
            (Group::Table(_), Element::Table(id)) => Some(*id as u64),
            _ => None,
        }
    }

    /// Inverse of [`Group::index_of`].
    pub fn element_at(&self, index: u64) -> Option<Element> {
        if index >= self.order()? {
            return None;
        }
        Some(match self {
            Group::Cyclic { .. } => Element::Residue(index),
            Group::Dihedral { sides } => Element::Dihedral {
                rotation: index % sides,
                reflection: index >= *sides,
            },
            Group::Table(_) => Element::Table(index as u32),
            _ => unreachable!("finite variants only"),
        })
    }

    /// The product on dense indices, `index_of(element_at(i) * element_at(j))`,
    /// without building elements.
    pub fn index_product(&self, i: u64, j: u64) -> Option<u64> {
        let order = self.order()?;
        if i >= order || j >= order {
            return None;
        }
        Some(match self {
            Group::Cyclic { order } => add_mod(i, j, *order),
            Group::Dihedral { sides } => {
                let (r1, s1) = (i % sides, i >= *sides);
                let (r2, s2) = (j % sides, j >= *sides);
                let r2 = if s1 { (sides - r2) % sides } else { r2 };
                add_mod(r1, r2, *sides) + if s1 ^ s2 { *sides } else { 0 }
            }
            Group::Table(t) => t.product(i as u32, j as u32) as u64,
            _ => unreachable!("finite variants only"),
        })
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        parse::parse_element(self, text)
    }
}

pub fn lamplighter_t() -> Element {
    Element::Lamplighter {
        lamps: Box::new([]),
        cursor: 1,
    }
}

pub fn lamplighter_a() -> Element {
    Element::Lamplighter {
        lamps: Box::new([0]),
        cursor: 0,
    }
}

fn in_range(bits: u32, v: i64) -> bool {
    if bits >= 64 {
        v != i64::MIN
    } else {
        v.unsigned_abs() < 1u64 << (bits - 1)
    }
}

fn checked_add(bits: u32, a: i64, b: i64) -> Result<i64> {
    match a.checked_add(b) {
        Some(v) if in_range(bits, v) => Ok(v),
        _ => Err(Error::Overflow { bits }),
    }
}

/// `(a + b) mod m` for `a, b < m`.
#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, wrapped) = a.overflowing_add(b);
    if wrapped || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn symmetric_difference(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits_suffix = |bits: u32| {
            if bits == DEFAULT_INT_BITS {
                String::new()
            } else {
                format!("/{bits}")
            }
        };
        match self {
            Group::IntegerLine { bits } => write!(f, "zz{}", bits_suffix(*bits)),
            Group::IntegerGrid { rank, bits } => write!(f, "zz^{rank}{}", bits_suffix(*bits)),
            Group::Cyclic { order } => write!(f, "cyclic:{order}"),
            Group::Dihedral { sides } => write!(f, "dihedral:{sides}"),
            Group::Lamplighter { bits } => write!(f, "lamplighter{}", bits_suffix(*bits)),
            Group::Table(t) => write!(f, "table:{}", t.order()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(g: &Group, s: &str) -> Element {
        g.parse_element(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let z = Group::integers();
        assert_eq!(z.multiply(&Element::Int(3), &Element::Int(4)).unwrap(), Element::Int(7));
        let c10 = Group::cyclic(10).unwrap();
        assert_eq!(
            c10.multiply(&Element::Residue(7), &Element::Residue(5)).unwrap(),
            Element::Residue(2)
        );
        let l = Group::lamplighter();
        let t = lamplighter_t();
        let t_inv = l.invert(&t).unwrap();
        assert_eq!(l.multiply(&t, &t_inv).unwrap(), l.identity());
    }

    #[test]
    fn invert_examples() {
        let z = Group::integers();
        assert_eq!(z.invert(&Element::Int(5)).unwrap(), Element::Int(-5));
        let d4 = Group::dihedral(4).unwrap();
        let r = el(&d4, "s1");
        assert_eq!(d4.invert(&r).unwrap(), r);
        let c10 = Group::cyclic(10).unwrap();
        assert_eq!(c10.invert(&Element::Residue(3)).unwrap(), Element::Residue(7));
    }

    #[test]
    fn mixed_operands_are_rejected() {
        let z = Group::integers();
        assert!(matches!(
            z.multiply(&Element::Int(1), &Element::Residue(1)),
            Err(Error::ForeignElement { .. })
        ));
        let c10 = Group::cyclic(10).unwrap();
        assert!(c10.multiply(&Element::Residue(10), &Element::Residue(1)).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let z = Group::integers();
        assert!(matches!(
            z.multiply(&Element::Int(i64::MAX), &Element::Int(1)),
            Err(Error::Overflow { bits: 64 })
        ));
        let z8 = Group::integers().with_int_bits(8).unwrap();
        assert_eq!(z8.multiply(&Element::Int(100), &Element::Int(27)).unwrap(), Element::Int(127));
        assert!(z8.multiply(&Element::Int(100), &Element::Int(28)).is_err());
        assert!(!z8.contains(&Element::Int(-128)));
        let l8 = Group::lamplighter().with_int_bits(8).unwrap();
        let far = Element::lamplighter(vec![], 127).unwrap();
        assert!(l8.multiply(&far, &lamplighter_t()).is_err());
    }

    #[test]
    fn lamplighter_toggles_at_cursor() {
        let l = Group::lamplighter();
        let (t, a) = (lamplighter_t(), lamplighter_a());
        let ta = l.multiply(&t, &a).unwrap();
        assert_eq!(ta, Element::lamplighter(vec![1], 1).unwrap());
        let tat = l.multiply(&ta, &t).unwrap();
        assert_eq!(tat.to_string(), "[1]@2");
        // a is an involution
        assert_eq!(l.multiply(&a, &a).unwrap(), l.identity());
        let inv = l.invert(&tat).unwrap();
        assert_eq!(inv.to_string(), "[-1]@-2");
    }

    #[test]
    fn huge_moduli_do_not_overflow() {
        let m = u64::MAX - 4;
        let c = Group::cyclic(m).unwrap();
        let x = Element::Residue(m - 1);
        assert_eq!(c.multiply(&x, &x).unwrap(), Element::Residue(m - 2));
        assert_eq!(c.multiply(&x, &Element::Residue(1)).unwrap(), c.identity());
    }

    #[test]
    fn dihedral_relation() {
        let d = Group::dihedral(6).unwrap();
        let (r, s) = (el(&d, "r1"), el(&d, "s0"));
        // s r s = r^-1
        let srs = d.multiply(&d.multiply(&s, &r).unwrap(), &s).unwrap();
        assert_eq!(srs, d.invert(&r).unwrap());
    }

    #[test]
    fn dense_indices_roundtrip() {
        for g in [Group::cyclic(9).unwrap(), Group::dihedral(5).unwrap()] {
            let m = g.order().unwrap();
            for i in 0..m {
                let e = g.element_at(i).unwrap();
                assert_eq!(g.index_of(&e), Some(i));
            }
            assert!(g.element_at(m).is_none());
        }
    }

    fn small_groups() -> Vec<Group> {
        let (s4, _) = TableGroup::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        vec![
            Group::cyclic(12).unwrap(),
            Group::dihedral(7).unwrap(),
            Group::table(s4),
        ]
    }

    #[test]
    fn finite_groups_are_associative_exhaustively() {
        for g in small_groups() {
            let elems: Vec<Element> = (0..g.order().unwrap()).map(|i| g.element_at(i).unwrap()).collect();
            for x in &elems {
                assert_eq!(g.multiply(x, &g.identity()).unwrap(), *x);
                assert!(g.is_identity(&g.multiply(x, &g.invert(x).unwrap()).unwrap()));
                for y in &elems {
                    let xy = g.multiply(x, y).unwrap();
                    for z in &elems {
                        assert_eq!(
                            g.multiply(&xy, z).unwrap(),
                            g.multiply(x, &g.multiply(y, z).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn index_product_matches_multiply() {
        for g in small_groups() {
            let m = g.order().unwrap();
            for i in 0..m {
                for j in 0..m {
                    let xy = g.multiply(&g.element_at(i).unwrap(), &g.element_at(j).unwrap()).unwrap();
                    assert_eq!(g.index_product(i, j), g.index_of(&xy));
                }
            }
            assert_eq!(g.index_product(m, 0), None);
        }
        assert_eq!(Group::integers().index_product(0, 0), None);
    }

    fn arb_lamplighter() -> impl Strategy<Value = Element> {
        (proptest::collection::btree_set(-20i64..20, 0..6), -20i64..20)
            .prop_map(|(l, c)| Element::lamplighter(l.into_iter().collect(), c).unwrap())
    }

    fn arb_grid() -> impl Strategy<Value = Element> {
        proptest::collection::vec(-1000i64..1000, 3).prop_map(Element::vector)
    }

    proptest! {
        #[test]
        fn lamplighter_group_laws(x in arb_lamplighter(), y in arb_lamplighter(), z in arb_lamplighter()) {
            let g = Group::lamplighter();
            let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
            let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            let inv = g.invert(&x).unwrap();
            prop_assert_eq!(g.multiply(&inv, &x).unwrap(), g.identity());
            prop_assert_eq!(g.invert(&inv).unwrap(), x);
        }

        #[test]
        fn grid_group_laws(x in arb_grid(), y in arb_grid(), z in arb_grid()) {
            let g = Group::grid(3).unwrap();
            let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
            let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            prop_assert_eq!(g.multiply(&x, &g.invert(&x).unwrap()).unwrap(), g.identity());
        }

        #[test]
        fn dihedral_group_laws(a in 0u64..22, b in 0u64..22, c in 0u64..22) {
            let g = Group::dihedral(11).unwrap();
            let [x, y, z] = [a, b, c].map(|i| g.element_at(i).unwrap());
            let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
            let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            prop_assert_eq!(g.invert(&g.invert(&x).unwrap()).unwrap(), x);
        }
    }
}
