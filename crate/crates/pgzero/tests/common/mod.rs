//! Shared helpers for the integration suites.

use pgzero::chartab::CharacterTable;
use pgzero::cyclo::CycInt;
use pgzero::group::Group;

/// Independent construction of the character rows of an abelian group with
/// a known cyclic decomposition: the group's generators, in order, must
/// generate independent cyclic factors of the given orders. Character τ
/// takes the value ζ_e^{Σ_i τ_i·c_i·(e/m_i)} at the element with
/// coordinates c. This route never touches the class-algebra machinery, so
/// it serves as an oracle for it.
pub fn dual_rows_for_decomposition(
    g: &Group,
    t: &CharacterTable,
    decomposition: &[u64],
) -> Vec<Vec<CycInt>> {
    assert!(g.is_abelian());
    let order: u64 = decomposition.iter().product();
    assert_eq!(order, g.order(), "decomposition must multiply to the order");
    let gens = g.generators();
    assert_eq!(
        gens.len(),
        decomposition.len(),
        "one generator per cyclic factor"
    );
    for (i, &m) in decomposition.iter().enumerate() {
        assert_eq!(g.element_order(gens[i]), m, "generator order mismatch");
    }
    // abelian classes are singletons indexed by element
    for (i, &rep) in t.classes.reps.iter().enumerate() {
        assert_eq!(rep, i as u32);
        assert_eq!(t.classes.sizes[i], 1);
    }

    let e = t.exponent;
    let r = decomposition.len();
    // coordinates of every element by walking all tuples
    let mut coords = vec![vec![0u64; r]; g.order() as usize];
    let mut seen = vec![false; g.order() as usize];
    let mut tuple = vec![0u64; r];
    loop {
        let mut x = 0u32;
        for (i, &c) in tuple.iter().enumerate() {
            x = g.mul(x, g.pow(gens[i], c));
        }
        assert!(!seen[x as usize], "decomposition is not independent");
        seen[x as usize] = true;
        coords[x as usize] = tuple.clone();
        // increment mixed-radix counter
        let mut i = r;
        loop {
            if i == 0 {
                return build_rows(e, decomposition, &coords);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < decomposition[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
}

fn build_rows(e: u64, decomposition: &[u64], coords: &[Vec<u64>]) -> Vec<Vec<CycInt>> {
    let r = decomposition.len();
    let mut rows = Vec::new();
    let mut tau = vec![0u64; r];
    'outer: loop {
        let row: Vec<CycInt> = coords
            .iter()
            .map(|c| {
                let mut exp = 0u64;
                for i in 0..r {
                    exp = (exp + tau[i] * c[i] % e * (e / decomposition[i])) % e;
                }
                CycInt::root_of_unity(e, exp).expect("valid conductor")
            })
            .collect();
        rows.push(row);
        let mut i = r;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            tau[i] += 1;
            if tau[i] < decomposition[i] {
                break;
            }
            tau[i] = 0;
        }
    }
    rows
}
