use std::io::{self, Write};

use super::OdeState;
use crate::scalar::Scalar;

/// Writes labelled trajectories as CSV with columns `t,theta,psi,eta,source`.
pub fn write_trajectory_csv<W: Write, T: Scalar>(
    mut w: W,
    series: &[(&str, &[T], &[OdeState<T>])],
) -> io::Result<()> {
    writeln!(w, "t,theta,psi,eta,source")?;
    for (label, times, states) in series {
        for (t, x) in times.iter().zip(states.iter()) {
            writeln!(w, "{},{},{},{},{}", t, x.theta, x.psi, x.eta, label)?;
        }
    }
    Ok(())
}
