use super::{PolicyError, PolicyProblem};
use crate::econ::{
    abatement_cost, damages, damages_slope, gross_output, net_output_share, period_utility, utility_argument,
    DamageForm, FexMode, UtilityScale,
};

/// Forward states, flows and costates of one control vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Discounted utility.
    pub welfare: f64,
    /// Gradient of `welfare` with respect to the controls (abatement then savings).
    pub gradient: Vec<f64>,
    pub k: Vec<f64>,
    pub m: Vec<[f64; 3]>,
    pub t: Vec<[f64; 2]>,
    pub mu: Vec<f64>,
    pub s: Vec<f64>,
    pub y_gross: Vec<f64>,
    pub y_net: Vec<f64>,
    pub damage_frac: Vec<f64>,
    pub abatement_frac: Vec<f64>,
    pub consumption: Vec<f64>,
    /// Industrial plus land-use emissions, 1000 GtC per year.
    pub emissions: Vec<f64>,
    /// Marginal welfare of capital.
    pub cost_k: Vec<f64>,
    /// Marginal welfare of the carbon reservoirs.
    pub cost_m: Vec<[f64; 3]>,
    /// Marginal welfare of the layer temperatures.
    pub cost_t: Vec<[f64; 2]>,
    /// Marginal utility of consumption, undiscounted.
    pub marginal_utility: Vec<f64>,
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        c += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + c
}

/// Simulates the controls `x` and returns welfare, its gradient and the
/// costate sequence. With `with_gradient` false only the forward pass runs.
pub fn evaluate(problem: &PolicyProblem, x: &[f64], with_gradient: bool) -> Result<Evaluation, PolicyError> {
    let h = problem.horizon;
    if x.len() != 2 * h {
        return Err(PolicyError::InvalidConfig(format!("expected {} controls, got {}", 2 * h, x.len())));
    }
    let n = problem.periods();
    let p = &problem.econ;
    let exo = &problem.exo;
    let dt = problem.dt;
    let g = &problem.transfer;
    let temp = &problem.temp;
    let lambda = temp.lambda();
    let dk = (1.0 - p.delta_k).powf(dt);
    let (share, linear) = match problem.fex {
        FexMode::Proportional(s) => (s, false),
        FexMode::Linear => (0.0, true),
    };
    let m_base = problem.climate.m_base;
    let ln2 = std::f64::consts::LN_2;
    let u_scale = match p.utility_scale {
        UtilityScale::PerCapita2007 => 1.0,
        UtilityScale::PerCapitaThousands2016 => 1000.0,
    };

    let mut ev = Evaluation {
        welfare: 0.0,
        gradient: Vec::new(),
        k: Vec::with_capacity(n + 1),
        m: Vec::with_capacity(n + 1),
        t: Vec::with_capacity(n + 1),
        mu: Vec::with_capacity(n),
        s: Vec::with_capacity(n),
        y_gross: Vec::with_capacity(n),
        y_net: Vec::with_capacity(n),
        damage_frac: Vec::with_capacity(n),
        abatement_frac: Vec::with_capacity(n),
        consumption: Vec::with_capacity(n),
        emissions: Vec::with_capacity(n),
        cost_k: Vec::new(),
        cost_m: Vec::new(),
        cost_t: Vec::new(),
        marginal_utility: Vec::with_capacity(n),
    };
    let mut k = problem.k0;
    let mut m = problem.climate0.m.as_array();
    let mut tt = [problem.climate0.t.at, problem.climate0.t.oc];
    let mut utilities = Vec::with_capacity(n);
    for t in 0..n {
        let c_idx = t.min(h - 1);
        let (mu, s) = (x[c_idx], x[h + c_idx]);
        if !(m[0] > 0.0) {
            return Err(PolicyError::Infeasible(format!("atmospheric carbon {} in period {}", m[0], t)));
        }
        let yg = gross_output(k, t, p, exo).map_err(|e| PolicyError::Infeasible(e.to_string()))?;
        let omega = damages(tt[0], p);
        let lam = abatement_cost(mu.max(0.0), exo.theta1[t], p.theta2);
        let y = yg * net_output_share(omega, lam, p.damage_form);
        let c = (1.0 - s) * y;
        if !(c > 0.0) || !c.is_finite() {
            return Err(PolicyError::Infeasible(format!("consumption {} in period {}", c, t)));
        }
        let e = exo.sigma[t] * yg * (1.0 - mu) + exo.e_land[t];
        let f_co2 = temp.f_2xco2 * (m[0] / m_base).ln() / ln2;
        let f = f_co2 * (1.0 + share) + if linear { exo.f_ex[t] } else { 0.0 };
        let xu = utility_argument(c, exo.labor[t], p.utility_scale);
        let uc = dt * xu.powf(-1.0 / p.ies) / u_scale;

        ev.k.push(k);
        ev.m.push(m);
        ev.t.push(tt);
        ev.mu.push(mu);
        ev.s.push(s);
        ev.y_gross.push(yg);
        ev.y_net.push(y);
        ev.damage_frac.push(omega);
        ev.abatement_frac.push(lam);
        ev.consumption.push(c);
        ev.emissions.push(e);
        ev.marginal_utility.push(uc);
        utilities.push(problem.weight(t) * period_utility(c, exo.labor[t], p));

        k = dk * k + dt * s * y;
        if !(k > 0.0) {
            return Err(PolicyError::Infeasible(format!("capital {} after period {}", k, t)));
        }
        m = [
            g[0][0] * m[0] + g[0][1] * m[1] + dt * e,
            g[1][0] * m[0] + g[1][1] * m[1] + g[1][2] * m[2],
            g[2][1] * m[1] + g[2][2] * m[2],
        ];
        tt = [
            tt[0] + dt * temp.c1 * (f - lambda * tt[0] - temp.c3 * (tt[0] - tt[1])),
            tt[1] + dt * temp.c4 * (tt[0] - tt[1]),
        ];
    }
    ev.k.push(k);
    ev.m.push(m);
    ev.t.push(tt);
    ev.welfare = compensated_sum(utilities.into_iter());
    if !ev.welfare.is_finite() {
        return Err(PolicyError::Infeasible("welfare is not finite".into()));
    }
    if !with_gradient {
        return Ok(ev);
    }

    let mut grad = vec![0.0; 2 * h];
    let mut ak = vec![0.0; n + 1];
    let mut am = vec![[0.0; 3]; n + 1];
    let mut at = vec![[0.0; 2]; n + 1];
    for t in (0..n).rev() {
        let disc = problem.weight(t);
        let c_idx = t.min(h - 1);
        let (mu, s) = (ev.mu[t], ev.s[t]);
        let (yg, y) = (ev.y_gross[t], ev.y_net[t]);
        let (omega, lam) = (ev.damage_frac[t], ev.abatement_frac[t]);
        let (akn, amn, atn) = (ak[t + 1], am[t + 1], at[t + 1]);

        let a_c = disc * ev.marginal_utility[t];
        let a_i = akn * dt;
        let a_y = a_c * (1.0 - s) + a_i * s;
        let a_e = amn[0] * dt;
        let (dg_domega, dg_dlam) = match p.damage_form {
            DamageForm::Subtractive2016 => (-1.0, -1.0),
            DamageForm::Multiplicative2007 => (-(1.0 - lam), -(1.0 - omega)),
        };
        let share_y = y / yg;
        let a_yg = a_y * share_y + a_e * exo.sigma[t] * (1.0 - mu);

        ak[t] = akn * dk + a_yg * p.alpha * yg / ev.k[t];
        let tat = ev.t[t][0];
        at[t] = [
            atn[0] * (1.0 - dt * temp.c1 * (lambda + temp.c3))
                + atn[1] * dt * temp.c4
                + a_y * yg * dg_domega * damages_slope(tat, p),
            atn[0] * dt * temp.c1 * temp.c3 + atn[1] * (1.0 - dt * temp.c4),
        ];
        let a_f = atn[0] * dt * temp.c1;
        am[t] = [
            g[0][0] * amn[0] + g[1][0] * amn[1] + a_f * temp.f_2xco2 * (1.0 + share) / (ev.m[t][0] * ln2),
            g[0][1] * amn[0] + g[1][1] * amn[1] + g[2][1] * amn[2],
            g[1][2] * amn[1] + g[2][2] * amn[2],
        ];

        let dlam_dmu = if mu > 0.0 {
            exo.theta1[t] * p.theta2 * mu.powf(p.theta2 - 1.0)
        } else {
            0.0
        };
        grad[c_idx] += a_y * yg * dg_dlam * dlam_dmu - a_e * exo.sigma[t] * yg;
        grad[h + c_idx] += -a_c * y + a_i * y;
    }
    ev.gradient = grad;
    ev.cost_k = ak;
    ev.cost_m = am;
    ev.cost_t = at;
    Ok(ev)
}
