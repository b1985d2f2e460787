//! Standard small groups used as fixtures and census controls.

use crate::group::{FiniteGroup, GroupElement, Perm, Realization};

pub fn abelian(orders: &[u32]) -> FiniteGroup {
    let gens = (0..orders.len())
        .map(|k| {
            let mut t = vec![0; orders.len()];
            t[k] = 1 % orders[k];
            GroupElement::Abelian(t)
        })
        .collect();
    FiniteGroup::new(Realization::Abelian { moduli: orders.to_vec() }, gens).expect("unit tuples are well formed")
}

pub fn cyclic(n: u32) -> FiniteGroup {
    abelian(&[n])
}

pub fn elementary_abelian(p: u32, rank: usize) -> FiniteGroup {
    abelian(&vec![p; rank])
}

fn cycle(n: usize, points: &[u32]) -> Perm {
    let mut images: Vec<u32> = (0..n as u32).collect();
    for (k, &p) in points.iter().enumerate() {
        images[p as usize] = points[(k + 1) % points.len()];
    }
    Perm::from_images(images).expect("a cycle is a bijection")
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let gens = if n < 2 { vec![] } else { vec![cycle(n, &[0, 1]), cycle(n, &(0..n as u32).collect::<Vec<_>>())] };
    FiniteGroup::permutation(n, gens).expect("valid permutations")
}

pub fn alternating(n: usize) -> FiniteGroup {
    let gens: Vec<Perm> = (2..n as u32).map(|k| cycle(n, &[0, 1, k])).collect();
    FiniteGroup::permutation(n, gens).expect("valid permutations")
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rotation = cycle(n, &(0..n as u32).collect::<Vec<_>>());
    let reflection = Perm::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).expect("bijection");
    FiniteGroup::permutation(n, vec![rotation, reflection]).expect("valid permutations")
}

/// Quaternion group of order 8 in its right regular representation on
/// `{±1, ±i, ±j, ±k}`.
pub fn quaternion8() -> FiniteGroup {
    // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; point = unit + 4·(sign is negative)
    fn unit_mul(a: usize, b: usize) -> (bool, usize) {
        const TABLE: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        TABLE[a][b]
    }
    let right_mult = |b: usize| {
        let images = (0..8)
            .map(|pt| {
                let (neg, unit) = (pt >= 4, pt % 4);
                let (flip, u) = unit_mul(unit, b);
                (u + if neg ^ flip { 4 } else { 0 }) as u32
            })
            .collect();
        Perm::from_images(images).expect("right multiplication is a bijection")
    };
    FiniteGroup::permutation(8, vec![right_mult(1), right_mult(2)]).expect("valid permutations")
}
