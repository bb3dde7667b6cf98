"""Recovery angles that make the six-layer ring circuit an exact repetition-code recovery.

Found by minimising the fidelity cost with the encoder pinned to the repetition
encoder, then rounded to 15 decimals.
"""

BIT_FLIP_BETA = (
    4.57863254728395, 3.926990816987242, 2.845213842350946, 1.570796326794895, 0.785398163397448,
    0.0, 3.674143084252306, 1.539718655161598, 6.030746929218775, 0.675299342253366,
    2.60602078981802, 2.92440829941864, 1.459656048203262, 4.712388980384691, 3.894023147820476,
    4.712388980384691, 1.340196692364022, 3.141592653589793, 3.141592653589793, 2.98751280128452,
    0.285304438145118, 0.870529759693669, 0.028270790291961, 0.163913011177625, 6.281296505826365,
    4.073664211660252, 3.174471048853184, 2.891169916479752, 4.173458321583316, 4.22934117168754,
    5.651992640304945, 4.934327035410019, 4.30489442617924, 0.0, 4.875334455272579,
    0.837171470401672, 4.13778180527146, 1.570796326794896, 3.141592653589793, 2.805186414456182,
    1.369999349615278, 1e-15, 0.543415859603713, 6.188216034654318, 1.155312435679802,
    0.133576463484305, 1.56894585900283, 5.497787143782137, 1.570796326794896, 3.416258603411602,
    5.664638710629016, 4.467664233512849, 5.778961087356496, 3.92699081698724, 0.0,
    6.004842997022636, 3.659706338523798, 5.548409258982479, 3.72539812828802, 1.570796326794897,
    3.37630048236801, 0.789781461491239, 4.703748330189342, 1.238539060676224, 3.185132856055266,
    3.359803715418196, 4.294378841085795, 5.452010702573878, 0.785398163397447, 4.014633839903041,
    2.076731949583594, 3.720838440406025, 3.926990816987241, 3.423844261981532, 4.712388980384691,
    3.141592653589794, 2.905766688510406, 1.570796326794896, 1.570796326794896, 4.469235556603893,
    4.358856716910232, 0.981930673266378, 0.31288958856064, 4.208115698873826, 3.054899375176172,
    4.803130297469981, 3.090037033173352, 2.001797219167654, 1.96813678836647, 0.92657733189039,
    3.926990816987242, 4.388140723374393, 4.590812268494291, 2.02059187941825, 3.926990816987242,
    3.141592653589793, 0.0, 3.141592653589793, 0.899591105246707, 5.059904295204472,
    3.926990816987241, 0.217076503330296, 2.153688309900812, 3.541304910717082, 5.007695344695081,
    3.356805225174899, 1.094629251880182, 0.357483360798697, 3.408601536979148, 6.157638011566529,
    0.785398163397448, 1e-15, 4.538631322974799, 0.785398163397448, 0.224925936619737,
    4.71238898038469, 4.71238898038469, 1.570796326794896, 1.570796326794896, 1.570796326794896,
)

PHASE_FLIP_BETA = (
    0.785398163397448, 3.842486447509956, 0.008911745192247, 5.834707703004832, 4.71238898038469,
    5.834707703004831, 0.270526538608913, 5.430109978617357, 4.601931798671368, 6.159144444358596,
    1.570796326794896, 3.709264714630651, 1.734590741580632, 0.825188242040456, 3.926990816987242,
    4.712388980384691, 1.481656833925405, 3.141592653589793, 5.537577222425146, 5.421060093732301,
    2.414241359828773, 6.205946489052435, 2.199558808944504, 0.64180273274611, 2.512746636731219,
    2.77258447654843, 4.062677917213826, 0.69695444450926, 1.128925170717576, 1.50845506490838,
    4.600129626255882, 5.037552352040588, 5.529159234339469, 2.356194490192345, 4.71238898038469,
    1.535746497569718, 1.957764032958267, 2.898181397589307, 1.525684738236122, 1.570796326794897,
    5.889660436517093, 3.819595756782232, 4.607725230205741, 0.562508353306361, 3.893627238782898,
    3.404906684072526, 5.428228636200051, 0.785398163397448, 0.0, 4.913610405828819,
    0.221634629624007, 3.516731209875351, 2.356194490192345, 5.348392605113577, 4.215314810355512,
    6.283185307179586, 4.652069846887984, 4.712388980384691, 0.0, 4.712388980384691,
    3.926990816987241, 5.092937588779388, 0.772259314271842, 5.204159338756615, 2.730914340424135,
    3.971819835101924, 1.570796326794896, 0.785398163397448, 0.002846486063258, 3.527438459428076,
    5.717067293662479, 3.347352670395566, 0.497074170029177, 0.785398163397449, 0.042435814729265,
    2.314473656401994, 4.712388980384689, 4.712388980384691, 3.141592653589793, 4.712388980384691,
    2.030094560394366, 1.570796326794894, 0.400470635369108, 5.874215638516286, 0.214210079035207,
    5.746672126817681, 6.256475255222202, 3.821660817772999, 5.622961355716781, 3.169990716071052,
    4.024311940717794, 3.493574595034616, 0.285562897780755, 0.358172741483528, 4.070968838582504,
    0.033157027802321, 4.929619262480948, 1.261466069420724, 3.161213391334416, 3.141592653589795,
    1.219097259280383, 3.926990816987238, 6.283185307179585, 0.788713917476316, 3.89452363324502,
    1.607600036182096, 4.021694687726457, 3.926990816987241, 1.570796326794896, 0.678635951914851,
    1.194452249894422, 2.269615873372816, 4.143171745377809, 3.267867002970676, 5.00869538603867,
    1.570796326794897, 0.0, 3.141592653589792, 4.489838595242193, 3.141592653589792,
)
