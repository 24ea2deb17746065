use super::network::{Model, Params};

/// One Adam update with bias correction, applied densely to every parameter.
pub fn adam_step(model: &mut Model, grads: &Params) {
    let cfg = &model.config;
    let (b1, b2, eps, lr) = (cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, cfg.learning_rate);
    model.adam.step += 1;
    let t = model.adam.step as i32;
    let c1 = 1.0 - b1.powi(t);
    let c2 = 1.0 - b2.powi(t);

    let params = model.params.buffers_mut();
    let ms = model.adam.first_moment.buffers_mut();
    let vs = model.adam.second_moment.buffers_mut();
    let gs = grads.buffers();
    assert_eq!(params.len(), gs.len(), "gradient bundle shape mismatch");

    for (((p, g), m), v) in params.into_iter().zip(gs).zip(ms).zip(vs) {
        assert_eq!(p.len(), g.len(), "gradient bundle shape mismatch");
        for (((pi, &gi), mi), vi) in p.iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut()) {
            if gi == 0.0 && *mi == 0.0 && *vi == 0.0 {
                continue;
            }
            *mi = b1 * *mi + (1.0 - b1) * gi;
            *vi = b2 * *vi + (1.0 - b2) * gi * gi;
            let m_hat = *mi / c1;
            let v_hat = *vi / c2;
            *pi -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
}

/// Plain gradient descent: `θ ← θ − η ∇θ`.
pub fn sgd_step(params: &mut Params, grads: &Params, eta: f64) {
    for (p, g) in params.buffers_mut().into_iter().zip(grads.buffers()) {
        p.iter_mut().zip(g).for_each(|(x, d)| *x -= eta * d);
    }
}
