//! Skip sets: typical source sequences the encoder answers with the flag.

use vldht::prob::Pmf;
use vldht::scheme::SkipSet;

fn main() -> vldht::Result<()> {
    let px = Pmf::bernoulli(0.3)?;
    for target in [0.05, 0.1, 0.2] {
        let s = SkipSet::build(&px, 12, 0.2, target)?;
        println!(
            "n = 12, target {target}: {} members, achieved mass {:.6} of typical mass {:.6}",
            s.len(),
            s.achieved_mass(),
            s.typical_mass()
        );
    }
    let small = SkipSet::build(&px, 6, 0.4, 0.1)?;
    for x in small.members()? {
        println!("  {:?}", x.symbols());
    }

    // too long to list; membership is decided by rule
    let big = SkipSet::build(&px, 300, 0.1, 0.15)?;
    println!(
        "n = 300: about {:.3e} members, materialized: {}, achieved mass {:.6}",
        big.len(),
        big.is_materialized(),
        big.achieved_mass()
    );
    Ok(())
}
