//! Entropies, divergences and typicality on a doubly symmetric binary source.

use vldht::prob::{
    binary_entropy, compose, entropy, is_jointly_typical, joint_type, kl_divergence,
    mutual_information, push_to_uy, Channel, JointPmf, Pmf, Sequence,
};

fn main() -> vldht::Result<()> {
    let pxy = JointPmf::dsbs(0.1)?;
    let px = pxy.row_marginal();
    println!("H(X) = {:.6}, I(X;Y) = {:.6}", entropy(&px), mutual_information(&pxy));
    println!("1 - h(0.1) = {:.6}", 1.0 - binary_entropy(0.1)?);

    // a test channel U|X and the induced joints
    let ch = Channel::bsc(0.25)?;
    let pux = compose(&px, &ch)?;
    let puy = push_to_uy(&pxy, &ch)?;
    println!("I(U;X) = {:.6}, I(U;Y) = {:.6}", mutual_information(&pux), mutual_information(&puy));

    let alt = JointPmf::product(&px, &pxy.col_marginal());
    // as pmfs over the four cells this divergence is I(X;Y) again
    let flat = |j: &JointPmf| Pmf::new(j.probs().to_vec());
    println!("D(P_XY || P_X P_Y) = {:.6}", kl_divergence(&flat(&pxy)?, &flat(&alt)?)?);

    let x = Sequence::new(2, vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 0])?;
    let y = Sequence::new(2, vec![0, 1, 1, 0, 1, 0, 1, 1, 1, 0])?;
    println!("joint type of (x, y): {:?}", joint_type(&x, &y)?.probs());
    for mu in [0.1, 0.2, 0.3] {
        println!("  jointly {mu}-typical w.r.t. P_XY: {}", is_jointly_typical(&x, &y, &pxy, mu)?);
    }
    Ok(())
}
