#![allow(clippy::excessive_precision)]

use logshift::special::complex_gamma;
use logshift::ComplexValue;

// Gamma(z) at pseudo-random points of Re z, Im z in [-50, 50], computed with mpmath at 40 digits.
const REFERENCE: [(f64, f64, f64, f64); 80] = [
    (
        -36.660134,
        6.069049,
        1.1598883807136965e-50,
        -6.7373848596294922e-51,
    ),
    (
        -8.979012,
        0.415019,
        -4.5434976262374736e-6,
        2.8527855781338108e-6,
    ),
    (
        45.355504,
        2.636381,
        -7.8160700120244895e+54,
        -5.3947423729080761e+54,
    ),
    (
        -44.692965,
        22.680309,
        -1.4486838268729788e-84,
        4.3522300062899151e-84,
    ),
    (
        12.761156,
        26.558861,
        -7.6590098958200059e-2,
        8.3072251930679255e-1,
    ),
    (
        -43.854131,
        -49.677268,
        1.3893680140680662e-111,
        -5.1267545431983212e-112,
    ),
    (
        -2.790379,
        6.339028,
        1.9470912493431867e-7,
        -1.3758591129509814e-7,
    ),
    (
        45.250112,
        -14.02572,
        -7.8349793495003632e+53,
        1.0198304150497021e+53,
    ),
    (
        -37.949246,
        13.668299,
        1.8294614045404044e-63,
        -3.5051040015712193e-62,
    ),
    (
        0.085628,
        -26.85246,
        -1.2329278075983652e-19,
        2.8223125537542871e-19,
    ),
    (
        -2.506739,
        5.596986,
        2.3171297812988931e-7,
        -1.8707858474386946e-6,
    ),
    (
        25.908033,
        26.41948,
        2.5574451056813607e+19,
        6.9612099936887652e+19,
    ),
    (
        35.702081,
        3.933513,
        3.469186407266638e+38,
        2.8476821228432874e+39,
    ),
    (
        38.807975,
        26.06117,
        -5.4210497808358862e+40,
        3.6999439514942927e+40,
    ),
    (
        -2.567211,
        -0.75613,
        -1.4111837920229601e-1,
        1.0737752706725601e-1,
    ),
    (
        26.236271,
        13.059974,
        6.9707509874596794e+23,
        -1.1938305667756094e+24,
    ),
    (
        -3.514446,
        9.785173,
        3.302953812103333e-11,
        -3.7880855782546585e-11,
    ),
    (
        38.312794,
        -0.874103,
        -4.2366041919664903e+43,
        1.4333120854932221e+42,
    ),
    (
        46.734899,
        -43.45385,
        -1.3761445211424615e+49,
        -2.2252205444576483e+49,
    ),
    (
        19.228363,
        0.852761,
        -9.8017286646127707e+15,
        7.3371081790475534e+15,
    ),
    (
        -38.450314,
        -31.527266,
        -1.689760271276937e-83,
        -1.8921399620981946e-83,
    ),
    (
        -18.291627,
        0.470319,
        3.804600875958522e-17,
        -8.6592630997248471e-17,
    ),
    (
        9.724368,
        10.870635,
        5.570224098305149e+2,
        6.7874100419583019e+2,
    ),
    (
        -2.639505,
        -0.022657,
        -8.8953546514126063e-1,
        -6.4717161499258249e-3,
    ),
    (
        -43.611214,
        0.810392,
        -7.4141921188665611e-55,
        3.2955179883663277e-55,
    ),
    (
        18.026467,
        -19.026057,
        3.6414167254114576e+10,
        -3.7677109015985214e+10,
    ),
    (
        49.77652,
        41.560394,
        -2.9761440296786238e+55,
        1.238146364440325e+55,
    ),
    (
        43.087558,
        -9.66279,
        1.3337918311879604e+50,
        6.4436795809774122e+50,
    ),
    (
        14.612388,
        -18.742534,
        -1.1899971881924384e+6,
        6.0643036766243312e+4,
    ),
    (
        34.804767,
        -25.617838,
        -1.0156911585452705e+33,
        2.162289204909399e+34,
    ),
    (
        47.608888,
        -0.876012,
        -5.5224038166337573e+58,
        1.3121375977409522e+58,
    ),
    (
        36.326484,
        2.703364,
        -2.9025677777058685e+40,
        -7.4846376146403314e+39,
    ),
    (
        -45.901261,
        7.440864,
        -1.2378742982173006e-67,
        1.7314580243617872e-67,
    ),
    (
        -31.594804,
        16.244491,
        3.4445326685986665e-55,
        5.1050785524464483e-56,
    ),
    (
        -30.042421,
        -41.814275,
        1.7956725416821873e-79,
        1.1364222108570089e-79,
    ),
    (
        -30.426707,
        -48.521067,
        2.1026731184801302e-86,
        -6.4801904941932247e-87,
    ),
    (
        -31.655674,
        20.206606,
        -1.2742063541464909e-60,
        8.3725435793997267e-60,
    ),
    (
        42.272876,
        0.217477,
        6.3659741377446252e+49,
        6.7097613459925561e+49,
    ),
    (
        -36.158296,
        42.481847,
        7.1602438923244989e-91,
        9.8895470736774624e-91,
    ),
    (
        20.774523,
        36.226802,
        3.3181115019069165e+7,
        4.0020120960238873e+7,
    ),
    (
        -39.604887,
        -0.208053,
        1.1833123183280271e-47,
        -7.6544393689273973e-48,
    ),
    (
        -39.134693,
        0.317251,
        -4.480011140423391e-47,
        6.1113757430762178e-47,
    ),
    (
        16.468619,
        28.779581,
        1.7139144780142968e+4,
        1.7760643290612837e+4,
    ),
    (
        -32.346339,
        -32.702878,
        -2.5468167306527739e-74,
        -1.1333495296398717e-74,
    ),
    (
        -13.31903,
        5.963913,
        -8.5339691340268156e-18,
        -7.1705619912102726e-18,
    ),
    (
        13.688305,
        6.850226,
        3.1602554570089248e+8,
        -3.9288889435916015e+8,
    ),
    (
        -18.94714,
        -2.97668,
        -2.6421677713701864e-21,
        6.0302602863349091e-21,
    ),
    (
        -24.831973,
        13.781581,
        -3.905167412127864e-42,
        -5.7112273883806108e-43,
    ),
    (
        -8.351287,
        0.897723,
        3.4191612282937908e-6,
        -2.9849471771849508e-6,
    ),
    (
        4.065784,
        -15.42737,
        1.1280185098912496e-6,
        -7.125465813023415e-7,
    ),
    (
        -4.028441,
        -39.856077,
        5.8142704108122193e-35,
        6.9674867523205145e-35,
    ),
    (
        46.474704,
        -7.436231,
        -3.9342864364705531e+56,
        8.9861173951003243e+55,
    ),
    (
        -20.026207,
        0.871356,
        8.8070494881739754e-20,
        1.3116996181511897e-19,
    ),
    (
        -11.043668,
        43.044961,
        3.5802862695044826e-49,
        -1.2503271657790247e-48,
    ),
    (
        34.126792,
        0.305611,
        6.4483238425050824e+36,
        1.1903554963688152e+37,
    ),
    (
        -32.596853,
        -21.329532,
        -1.4557966769572225e-62,
        3.8941339941389214e-63,
    ),
    (
        12.531563,
        0.598297,
        1.1958595467389818e+7,
        1.4534117168988354e+8,
    ),
    (
        22.679295,
        -24.601663,
        -1.1227350532682759e+14,
        3.447049741843256e+15,
    ),
    (
        -18.003039,
        -14.192771,
        -6.1573583733936508e-33,
        1.1930482076589735e-33,
    ),
    (
        -49.270982,
        -13.38968,
        -1.1203108889810337e-80,
        -2.3878128618525848e-81,
    ),
    (
        7.733714,
        -0.211562,
        2.6965108112254561e+3,
        -1.2003951513409571e+3,
    ),
    (
        -7.325907,
        -0.937757,
        -2.8035350429660984e-5,
        -2.197811585106091e-5,
    ),
    (
        27.700071,
        -11.515866,
        2.9641367671942018e+26,
        -2.3379222326070154e+26,
    ),
    (
        -13.899352,
        27.351573,
        4.2104282438848204e-40,
        -4.3346166574515168e-40,
    ),
    (
        34.746306,
        49.951214,
        3.2205309337670905e+25,
        -8.2104850131985571e+24,
    ),
    (
        42.857388,
        47.960131,
        3.168352922542477e+40,
        -6.4273220104178088e+40,
    ),
    (
        43.589973,
        0.221927,
        8.6429485713954614e+51,
        9.5493756292722366e+51,
    ),
    (
        -7.785564,
        -0.576475,
        3.8765217592620958e-5,
        -1.4100443923217845e-5,
    ),
    (
        29.725573,
        2.974233,
        -2.4496280778265689e+30,
        -1.7438284014034614e+30,
    ),
    (
        2.606046,
        22.157129,
        1.1093838885297549e-12,
        -7.0515206057142727e-13,
    ),
    (
        -9.889668,
        -48.02314,
        6.2686507003385588e-51,
        -1.2082604144516054e-50,
    ),
    (
        19.652702,
        -11.733037,
        -1.0675068175007658e+15,
        9.9049030897141156e+14,
    ),
    (
        2.368536,
        -20.812017,
        1.5282739053599811e-12,
        -4.3719084923788361e-12,
    ),
    (
        -14.977934,
        -11.127624,
        3.2776907509512889e-27,
        -1.3712206707673831e-25,
    ),
    (
        29.942849,
        -13.892687,
        -2.8859331038164767e+29,
        1.0610277166219293e+29,
    ),
    (
        -45.139342,
        -0.138738,
        7.8773226045844557e-57,
        -2.3685807791258559e-56,
    ),
    (
        -3.916592,
        -44.426628,
        -4.84681067448634e-38,
        4.3036364310685503e-38,
    ),
    (
        -44.614023,
        -0.729417,
        1.7449275347384564e-56,
        1.5138496314147354e-56,
    ),
    (
        28.043564,
        -0.461734,
        4.9796835088025965e+26,
        -1.2522130491445092e+28,
    ),
    (
        27.6594,
        0.619296,
        -1.5996123565288563e+27,
        3.1178239624920062e+27,
    ),
];

#[test]
fn relative_error_within_budget() {
    let mut worst: f64 = 0.0;
    for (re, im, gre, gim) in REFERENCE {
        let want = ComplexValue::new(gre, gim);
        let got = complex_gamma(ComplexValue::new(re, im)).unwrap();
        let rel = (got - want).norm() / want.norm();
        assert!(
            rel <= 1e-12,
            "z = {re}{im:+}i: got {got}, want {want}, rel {rel:e}"
        );
        worst = worst.max(rel);
    }
    eprintln!("worst relative error {worst:e}");
}
