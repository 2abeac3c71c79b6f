//! Entangling phase from a mass (or energy) difference, the resulting
//! concurrence, and how many repetitions a witness needs.

use gravrotor::phase::{
    branch_phases, concurrence, entangling_phase_from_energy, entangling_phase_from_mass, final_state, mass_equivalent,
    repetitions_required, MassSuperposition,
};
use gravrotor::physical::CODATA_2018;

fn main() -> gravrotor::Result<()> {
    let k = CODATA_2018;
    let (t, r) = (1.0, 1e-6);

    let dm = 4e-18;
    let phi = entangling_phase_from_mass(&k, dm, t, r)?;
    println!("dM = {dm:e} kg, T = {t} s, r = {r:e} m");
    println!("  phi          = {phi:.6e} rad");
    println!("  concurrence  = {:.6e}", concurrence(phi));
    println!("  repetitions  = {}", repetitions_required(phi)?);

    // the same phase read off a stored rotational energy
    let e = 0.4;
    let phi_e = entangling_phase_from_energy(&k, e, t, r)?;
    println!("E = {e} J  (mass equivalent {:.4e} kg)", mass_equivalent(&k, e));
    println!("  phi          = {phi_e:.6e} rad");

    // branch phases for a light pair; at mg scale they reach 1e17 rad and the
    // combination is lost to rounding, so use the closed form there
    let ms = MassSuperposition {
        base_mass: 1e-17,
        mass_difference: dm,
    };
    let state = branch_phases(&k, ms, t, r)?;
    println!("branch phases for m = 1e-17 kg: {:?}", state.phases());
    println!("  combined     = {:.6e} rad", state.entangling_phase());

    let ideal = final_state(phi);
    println!("ideal state amplitudes: {:?}", ideal.amplitudes());
    Ok(())
}
