use crate::error::{Error, Result};
use crate::nn::DenseNet;

/// Elementwise arithmetic mean of networks sharing one architecture.
pub fn fedavg(nets: &[&DenseNet]) -> Result<DenseNet> {
    let first = nets
        .first()
        .ok_or_else(|| Error::shape("federated averaging needs at least one network"))?;
    if nets.iter().any(|n| !n.same_architecture(first)) {
        return Err(Error::shape("federated averaging over different architectures"));
    }
    let mut avg = (*first).clone();
    let n = nets.len() as f64;
    let params: Vec<Vec<f64>> = nets[1..].iter().map(|n| n.parameters()).collect();
    // Averaging offsets from the first net keeps identical inputs exact.
    for (i, p) in avg.parameters_mut().enumerate() {
        let base = *p;
        *p = base + params.iter().map(|v| v[i] - base).sum::<f64>() / n;
    }
    Ok(avg)
}
