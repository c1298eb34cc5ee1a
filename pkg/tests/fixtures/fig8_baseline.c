void fputs_color_cell_close(long param_1,long param_2,char *param_3)
{
  if (!param_1) return;
  if (!(*(byte*)(param_1 + 0x140) & 2)) return;
  if (*(int*)(param_1 + 0x108)!= 0) return;
  *(char **)param_1 + 0x120 = param_3;
}
