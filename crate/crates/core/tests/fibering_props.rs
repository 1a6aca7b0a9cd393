use immorder::fibering::{
    abelianization, brown_fibered, cyclically_reduce, epimorphisms_to_z, integral_lift_exists, parse_word,
    BrownVerdict, FreeWord, Presentation, ZMap,
};
use proptest::prelude::*;

const M313: &str = "aaaBAAAbbaaababb";

fn inverse_char(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

/// Scans adjacent pairs, including the wrap-around pair.
fn scan_cyclically_reduced(s: &str) -> bool {
    let c: Vec<char> = s.chars().collect();
    let n = c.len();
    n < 2 || (0..n).all(|i| c[(i + 1) % n] != inverse_char(c[i]))
}

#[test]
fn m313_relator_is_cyclically_reduced() {
    assert!(scan_cyclically_reduced(M313));
    let w = parse_word(M313).unwrap();
    assert_eq!(cyclically_reduce(&w), w);
    assert_eq!(w.to_string(), M313);
}

fn word(max_len: usize) -> impl Strategy<Value = FreeWord> {
    proptest::collection::vec(proptest::sample::select(vec!['a', 'b', 'A', 'B']), 1..=max_len)
        .prop_map(|cs| parse_word(&cs.into_iter().collect::<String>()).unwrap())
}

fn relator(max_len: usize) -> impl Strategy<Value = FreeWord> {
    word(max_len).prop_filter("nontrivial after reduction", |w| !w.is_empty())
}

/// A cyclically reduced word with a `φ`, both nonzero on generators, that
/// kills it.
fn killed_word() -> impl Strategy<Value = (FreeWord, ZMap)> {
    word(20).prop_filter_map("needs a nontrivial cyclic word and φ", |w| {
        let w = cyclically_reduce(&w);
        if w.is_empty() {
            return None;
        }
        let [x, y] = w.exponent_sums();
        let phi = if x == 0 && y == 0 { ZMap { a: 1, b: 1 } } else { ZMap { a: y, b: -x } };
        (phi.a != 0 && phi.b != 0).then_some((w, phi))
    })
}

fn extrema(v: &BrownVerdict) -> Option<(i64, i64)> {
    match v {
        BrownVerdict::FiberedKernelFg { min, max, .. } => Some((*min, *max)),
        BrownVerdict::NotFg { .. } => None,
    }
}

proptest! {
    #[test]
    fn cyclic_reduction_is_reduced_and_conjugate(w in word(20)) {
        let r = cyclically_reduce(&w);
        prop_assert!(scan_cyclically_reduced(&r.to_string()));
        prop_assert!(r.is_cyclically_reduced());
        // w = u r u^{-1} for the stripped prefix u
        let k = (w.len() - r.len()) / 2;
        let u = FreeWord::from_letters(w.letters()[..k].iter().copied());
        prop_assert_eq!(u.concat(&r).concat(&u.inverse()), w);
    }

    #[test]
    fn brown_is_invariant_under_inversion((w, phi) in killed_word()) {
        let direct = brown_fibered(&w, phi).unwrap();
        let inverted = brown_fibered(&w.inverse(), phi).unwrap();
        prop_assert_eq!(direct.is_fibered(), inverted.is_fibered());
    }

    #[test]
    fn negating_phi_swaps_extrema((w, phi) in killed_word()) {
        let direct = brown_fibered(&w, phi).unwrap();
        let negated = brown_fibered(&w, phi.neg()).unwrap();
        prop_assert_eq!(direct.is_fibered(), negated.is_fibered());
        if let (Some((min, max)), Some((nmin, nmax))) = (extrema(&direct), extrema(&negated)) {
            prop_assert_eq!((min, max), (-nmax, -nmin));
        }
    }

    #[test]
    fn brown_is_invariant_under_rotation((w, phi) in killed_word(), k in 0usize..20) {
        let direct = brown_fibered(&w, phi).unwrap();
        let rotated = brown_fibered(&w.rotate(k), phi).unwrap();
        prop_assert_eq!(direct.is_fibered(), rotated.is_fibered());
        if let (Some((min, max)), Some((rmin, rmax))) = (extrema(&direct), extrema(&rotated)) {
            prop_assert_eq!(max - min, rmax - rmin);
        }
    }

    #[test]
    fn abelianization_invariances(r1 in relator(12), r2 in relator(12), u in word(6)) {
        let base = abelianization(&Presentation::new(vec![r1.clone(), r2.clone()]).unwrap()).unwrap();
        let variants = [
            vec![r1.inverse(), r2.clone()],
            vec![r2.clone(), r1.clone()],
            vec![u.concat(&r1).concat(&u.inverse()), r2.clone()],
        ];
        for v in variants {
            prop_assert_eq!(abelianization(&Presentation::new(v).unwrap()).unwrap(), base.clone());
        }
    }

    #[test]
    fn trivial_character_always_lifts(r1 in relator(12), r2 in relator(12)) {
        let p = Presentation::new(vec![r1, r2]).unwrap();
        prop_assert!(integral_lift_exists(&p, [false, false]).unwrap());
        for phi in epimorphisms_to_z(&p).unwrap().maps {
            let reduced = [phi.a.rem_euclid(2) == 1, phi.b.rem_euclid(2) == 1];
            prop_assert!(integral_lift_exists(&p, reduced).unwrap());
        }
    }
}

#[test]
fn small_brown_examples() {
    let v = brown_fibered(&parse_word("abAB").unwrap(), ZMap { a: 1, b: 1 }).unwrap();
    assert_eq!(v.values(), &[1, 2, 1, 0]);
    assert!(v.is_fibered());
    let v = brown_fibered(&parse_word("abab").unwrap(), ZMap { a: -1, b: 1 }).unwrap();
    assert!(!v.is_fibered());
    let free = Presentation::parse("<a,b|>").unwrap();
    assert_eq!(abelianization(&free).unwrap().to_string(), "Z^2");
    let e = epimorphisms_to_z(&free).unwrap();
    assert!(e.multiple && e.maps.len() == 2);
}
