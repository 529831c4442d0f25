use std::time::Instant;
fn main() {
    let g = pgzero::group::build_family(&"dihedral:512".parse().unwrap()).unwrap();
    let t0 = Instant::now();
    let classes = pgzero::structure::conjugacy_classes(&g).unwrap();
    eprintln!("classes: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let tables = pgzero::chartab::structure_constants(&g, &classes).unwrap();
    eprintln!("constants: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let modular = pgzero::chartab::modular_characters(&tables, &classes, g.order()).unwrap();
    eprintln!("modular: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let table = pgzero::chartab::lift_table(&g, classes, &tables, modular).unwrap();
    eprintln!("lift: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let rep = pgzero::chartab::verify_table(&table);
    eprintln!("verify: {:?} pass={}", t0.elapsed(), rep.pass);
}
